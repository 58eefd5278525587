#include "model.hpp"

#include <cmath>

namespace advae {

Variant parse_variant(const std::string& s) {
    if (s == "advae") return Variant::advae;
    if (s == "e_advae" || s == "e-advae") return Variant::e_advae;
    if (s == "g_advae" || s == "g-advae") return Variant::g_advae;
    if (s == "vae") return Variant::vae;
    if (s == "ae") return Variant::ae;
    throw UsageError("unknown variant '" + s + "' (expected advae|e_advae|g_advae|vae|ae)");
}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::advae: return "advae";
    case Variant::e_advae: return "e_advae";
    case Variant::g_advae: return "g_advae";
    case Variant::vae: return "vae";
    case Variant::ae: return "ae";
    }
    return "?";
}

void Hyperparams::validate() const {
    if (lambda < 0.0 || gamma < 0.0) throw UsageError("lambda and gamma must be >= 0");
    if (margin_mse <= 0.0 || margin_kld <= 0.0) throw UsageError("margins must be > 0");
    if (latent_dim < 1) throw UsageError("latent_dim must be >= 1");
    if (mc_samples < 1) throw UsageError("mc_samples (L) must be >= 1");
    if (batch_size < 1) throw UsageError("batch_size must be >= 1");
    if (hidden_depth < 1) throw UsageError("hidden_depth must be >= 1");
}

std::size_t default_latent_dim(std::size_t data_dim) {
    const std::size_t quarter = (data_dim + 3) / 4;
    return quarter < 2 ? 2 : quarter;
}

AdvaeModel make_model(std::size_t data_dim, Variant variant, Hyperparams hyper, RngStream& rng) {
    if (data_dim == 0) throw InvalidDimensionError("make_model: zero data dim");
    if (hyper.latent_dim == 0) hyper.latent_dim = default_latent_dim(data_dim);
    hyper.validate();
    const std::size_t width = hyper.hidden_width ? hyper.hidden_width : data_dim;
    const std::vector<std::size_t> hidden(hyper.hidden_depth, width);
    const std::size_t latent = hyper.latent_dim;

    AdvaeModel model;
    model.data_dim = data_dim;
    model.variant = variant;
    model.hyper = hyper;
    model.encoder = DenseNet(data_dim, hidden, Activation::rectifier, {latent, latent},
                             {Activation::identity, Activation::identity}, rng, "E");
    model.generator = DenseNet(latent, hidden, Activation::rectifier, {data_dim},
                               {Activation::sigmoid}, rng, "G");
    model.transformer = DenseNet(2 * latent, hidden, Activation::rectifier, {latent, latent},
                                 {Activation::identity, Activation::identity}, rng, "T");
    return model;
}

static Matrix sigma_from_logvar(const Matrix& logvar) {
    Matrix sigma = logvar;
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma.at_flat(i) = std::exp(0.5 * sigma.at_flat(i));
    return sigma;
}

EncodeOut encode_full(const AdvaeModel& model, const Matrix& x) {
    if (x.cols() != model.data_dim)
        throw InvalidDimensionError("encode: input dim " + std::to_string(x.cols()) +
                                    " != " + std::to_string(model.data_dim));
    EncodeOut out;
    auto heads = model.encoder.forward2(x, out.cache);
    out.mu = std::move(heads.first);
    out.logvar = std::move(heads.second);
    out.sigma = sigma_from_logvar(out.logvar);
    return out;
}

GaussianParams encode(const AdvaeModel& model, const Matrix& x) {
    if (x.cols() != model.data_dim)
        throw InvalidDimensionError("encode: input dim mismatch");
    auto heads = model.encoder.infer2(x);
    return GaussianParams{heads.first, sigma_from_logvar(heads.second)};
}

TransformOut transform_full(const AdvaeModel& model, const GaussianParams& gp) {
    if (gp.mu.cols() != model.hyper.latent_dim)
        throw InvalidDimensionError("transform: latent dim mismatch");
    TransformOut out;
    auto heads = model.transformer.forward2(hconcat(gp.mu, gp.sigma), out.cache);
    out.mu_t = std::move(heads.first);
    out.logvar_t = std::move(heads.second);
    out.sigma_t = sigma_from_logvar(out.logvar_t);
    return out;
}

GaussianParams transform(const AdvaeModel& model, const GaussianParams& gp) {
    if (gp.mu.cols() != model.hyper.latent_dim)
        throw InvalidDimensionError("transform: latent dim mismatch");
    auto heads = model.transformer.infer2(hconcat(gp.mu, gp.sigma));
    return GaussianParams{heads.first, sigma_from_logvar(heads.second)};
}

std::vector<Matrix> reparameterize(const GaussianParams& gp, RngStream& rng, std::size_t count) {
    std::vector<Matrix> draws;
    draws.reserve(count);
    for (std::size_t l = 0; l < count; ++l) {
        Matrix eps = sample_standard_normal(rng, gp.mu.rows(), gp.mu.cols());
        Matrix z = gp.mu;
        for (std::size_t i = 0; i < z.size(); ++i)
            z.at_flat(i) += gp.sigma.at_flat(i) * eps.at_flat(i);
        draws.push_back(std::move(z));
    }
    return draws;
}

Matrix sample_latent(const AdvaeModel& model, const GaussianParams& gp, RngStream& rng) {
    if (model.deterministic_sampler()) return gp.mu;
    return reparameterize(gp, rng, 1)[0];
}

} // namespace advae
