#include "train.hpp"

#include <chrono>
#include <cstdio>

namespace advae {

void TrainTrace::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open trace file " + path);
    std::fprintf(f, "iteration,mse,kld_prior,l_T,l_Gz,l_GzT,l_G,l_E\n");
    for (const TraceRow& row : rows)
        std::fprintf(f, "%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", row.iteration,
                     row.losses.mse, row.losses.kld_prior, row.losses.l_T, row.losses.l_Gz,
                     row.losses.l_GzT, row.losses.l_G, row.losses.l_E);
    std::fclose(f);
}

std::vector<Parameter*> gen_trans_params(AdvaeModel& model) {
    std::vector<Parameter*> out = model.generator.parameters();
    for (Parameter* p : model.transformer.parameters()) out.push_back(p);
    return out;
}

std::vector<Parameter*> encoder_params(AdvaeModel& model) { return model.encoder.parameters(); }

std::vector<Parameter*> joint_params(AdvaeModel& model) {
    std::vector<Parameter*> out = model.encoder.parameters();
    for (Parameter* p : model.generator.parameters()) out.push_back(p);
    return out;
}

std::vector<Parameter*> all_params(AdvaeModel& model) {
    std::vector<Parameter*> out = joint_params(model);
    for (Parameter* p : model.transformer.parameters()) out.push_back(p);
    return out;
}

AdvaeOptimizers make_optimizers(AdvaeModel& model, const AdamConfig& config) {
    AdvaeOptimizers opt;
    opt.gen_trans = AdamState(gen_trans_params(model), config);
    opt.enc = AdamState(encoder_params(model), config);
    opt.joint = AdamState(joint_params(model), config);
    return opt;
}

static void zero_all(AdvaeModel& model) {
    model.encoder.zero_grad();
    model.generator.zero_grad();
    model.transformer.zero_grad();
}

static void require_finite_losses(const LossBreakdown& losses, std::size_t iteration) {
    if (!losses.all_finite())
        throw DivergedError("training diverged at iteration " + std::to_string(iteration));
}

LossBreakdown train_step_one(AdvaeModel& model, const Matrix& batch, AdvaeOptimizers& opt,
                             RngStream& rng, StepOneData* carry_out) {
    StepOneData data;
    data.x = batch;
    data.eps_z = sample_standard_normal(rng, batch.rows(), model.hyper.latent_dim);
    data.eps_zT = sample_standard_normal(rng, batch.rows(), model.hyper.latent_dim);

    LossBreakdown losses = step_one_loss(model, data, true);
    require_finite_losses(losses, 0);
    opt.gen_trans.step(gen_trans_params(model));
    zero_all(model);
    if (carry_out) *carry_out = std::move(data);
    return losses;
}

LossBreakdown train_step_two(AdvaeModel& model, const Matrix& batch, AdvaeOptimizers& opt,
                             RngStream& rng, const StepOneData* carry) {
    StepTwoData data;
    data.x = batch;
    if (carry) {
        data.eps_z = carry->eps_z;
        data.z_T = carry->z_T;
    } else {
        data.eps_z = sample_standard_normal(rng, batch.rows(), model.hyper.latent_dim);
        GaussianParams gp = encode(model, batch);
        GaussianParams gp_t = transform(model, gp);
        Matrix eps_t = sample_standard_normal(rng, batch.rows(), model.hyper.latent_dim);
        data.z_T = gp_t.mu;
        for (std::size_t i = 0; i < data.z_T.size(); ++i)
            data.z_T.at_flat(i) += gp_t.sigma.at_flat(i) * eps_t.at_flat(i);
    }

    LossBreakdown losses = step_two_loss(model, data, true);
    require_finite_losses(losses, 0);
    opt.enc.step(encoder_params(model));
    zero_all(model);
    return losses;
}

static Matrix sample_batch(const Matrix& train_x, std::size_t batch_size, RngStream& rng) {
    Matrix batch(batch_size, train_x.cols());
    for (std::size_t b = 0; b < batch_size; ++b) {
        const std::size_t r = rng.index(train_x.rows());
        for (std::size_t c = 0; c < train_x.cols(); ++c) batch(b, c) = train_x(r, c);
    }
    return batch;
}

TrainTrace fit(AdvaeModel& model, const Matrix& train_x, const TrainConfig& config) {
    if (train_x.rows() == 0) throw DataError("fit: empty training set");
    if (train_x.cols() != model.data_dim) throw InvalidDimensionError("fit: feature dim mismatch");
    const bool alternating = model.uses_transformer();
    AdvaeOptimizers opt = make_optimizers(model, config.optimizer);
    RngStream base(config.seed);
    TrainTrace trace;
    using clock = std::chrono::steady_clock;

    for (std::size_t it = 1; it <= config.max_iters; ++it) {
        RngStream iter_rng = base.substream(it);
        Matrix batch = sample_batch(train_x, config.batch_size, iter_rng);
        const bool log_now = it == 1 || it == config.max_iters ||
                             (config.log_every > 0 && it % config.log_every == 0);

        LossBreakdown merged;
        if (alternating) {
            const std::uint64_t enc_hash_before =
                config.check_contracts && log_now ? weight_hash(model.encoder) : 0;
            auto t0 = clock::now();
            StepOneData carry;
            LossBreakdown first = train_step_one(model, batch, opt, iter_rng, &carry);
            auto t1 = clock::now();
            if (config.check_contracts && log_now && weight_hash(model.encoder) != enc_hash_before)
                throw StateError("freeze contract violated: encoder changed in step one");

            const std::uint64_t gen_hash_before =
                config.check_contracts && log_now
                    ? (weight_hash(model.generator) ^ weight_hash(model.transformer))
                    : 0;
            LossBreakdown second = train_step_two(model, batch, opt, iter_rng, &carry);
            auto t2 = clock::now();
            if (config.check_contracts && log_now &&
                (weight_hash(model.generator) ^ weight_hash(model.transformer)) != gen_hash_before)
                throw StateError("detach contract violated: generator/transformer changed in step two");

            trace.seconds_step_one += std::chrono::duration<double>(t1 - t0).count();
            trace.seconds_step_two += std::chrono::duration<double>(t2 - t1).count();

            merged = first;
            merged.mse = second.mse;
            merged.kld_prior = second.kld_prior;
            merged.l_E = second.l_E;
        } else {
            auto t0 = clock::now();
            Matrix eps = sample_standard_normal(iter_rng, batch.rows(), model.hyper.latent_dim);
            merged = single_step_loss(model, batch, eps, true);
            require_finite_losses(merged, it);
            opt.joint.step(joint_params(model));
            zero_all(model);
            trace.seconds_step_one += std::chrono::duration<double>(clock::now() - t0).count();
        }
        require_finite_losses(merged, it);

        if (log_now) trace.rows.push_back(TraceRow{it, merged});
    }
    return trace;
}

} // namespace advae
