#include "score.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace advae {

NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "none") return NoiseKind::none;
    if (s == "uniform01_add") return NoiseKind::uniform01_add;
    if (s == "gaussian01_add") return NoiseKind::gaussian01_add;
    if (s == "const_half_add") return NoiseKind::const_half_add;
    if (s == "scale_last_half_by_half") return NoiseKind::scale_last_half_by_half;
    if (s == "zero_first_half") return NoiseKind::zero_first_half;
    throw UsageError("unknown noise kind '" + s + "'");
}

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::uniform01_add: return "uniform01_add";
    case NoiseKind::gaussian01_add: return "gaussian01_add";
    case NoiseKind::const_half_add: return "const_half_add";
    case NoiseKind::scale_last_half_by_half: return "scale_last_half_by_half";
    case NoiseKind::zero_first_half: return "zero_first_half";
    }
    return "?";
}

const std::vector<NoiseKind>& probe_noise_kinds() {
    static const std::vector<NoiseKind> kinds = {
        NoiseKind::uniform01_add, NoiseKind::gaussian01_add, NoiseKind::const_half_add,
        NoiseKind::scale_last_half_by_half, NoiseKind::zero_first_half};
    return kinds;
}

static std::uint64_t row_content_hash(const Matrix& x, std::size_t row) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    const double* v = x.data() + row * x.cols();
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(v);
    for (std::size_t i = 0; i < x.cols() * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

static std::vector<RngStream> row_streams(const Matrix& x, const RngStream& rng) {
    std::vector<RngStream> streams;
    streams.reserve(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r)
        streams.push_back(rng.substream(row_content_hash(x, r)));
    return streams;
}

static void apply_noise(Matrix& z, NoiseKind kind, std::vector<RngStream>& noise_streams) {
    const std::size_t k = z.cols();
    const std::size_t half = k / 2;
    switch (kind) {
    case NoiseKind::none:
        break;
    case NoiseKind::uniform01_add:
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t c = 0; c < k; ++c) z(r, c) += noise_streams[r].uniform01();
        break;
    case NoiseKind::gaussian01_add:
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t c = 0; c < k; ++c) z(r, c) += noise_streams[r].normal();
        break;
    case NoiseKind::const_half_add:
        for (std::size_t i = 0; i < z.size(); ++i) z.at_flat(i) += 0.5;
        break;
    case NoiseKind::scale_last_half_by_half:
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t c = half; c < k; ++c) z(r, c) *= 0.5;
        break;
    case NoiseKind::zero_first_half:
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t c = 0; c < half; ++c) z(r, c) = 0.0;
        break;
    }
}

static std::vector<double> row_sq_errors(const Matrix& x, const Matrix& recon_mean) {
    std::vector<double> s(x.rows(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double d = x(r, c) - recon_mean(r, c);
            acc += d * d;
        }
        s[r] = acc;
    }
    return s;
}

std::vector<double> anomaly_scores(const AdvaeModel& model, const Matrix& x, const RngStream& rng,
                                   std::size_t* out_of_range) {
    if (x.cols() != model.data_dim) throw InvalidDimensionError("anomaly_scores: input dim mismatch");
    if (out_of_range) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c)
                if (x(r, c) < -0.05 - 1e-12 || x(r, c) > 1.05 + 1e-12) {
                    ++count;
                    break;
                }
        *out_of_range = count;
    }
    if (x.rows() == 0) return {};

    GaussianParams gp = encode(model, x);
    if (model.deterministic_sampler()) {
        Matrix recon = model.generator.infer(gp.mu);
        return row_sq_errors(x, recon);
    }

    const std::size_t draws = model.hyper.mc_samples;
    std::vector<RngStream> streams = row_streams(x, rng);
    Matrix sum(x.rows(), x.cols());
    Matrix z(x.rows(), gp.mu.cols());
    for (std::size_t l = 0; l < draws; ++l) {
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t c = 0; c < z.cols(); ++c)
                z(r, c) = gp.mu(r, c) + gp.sigma(r, c) * streams[r].normal();
        sum += model.generator.infer(z);
    }
    sum *= 1.0 / static_cast<double>(draws);
    return row_sq_errors(x, sum);
}

double wasserstein_1d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw InvalidDimensionError("wasserstein_1d: length mismatch");
    if (a.empty()) return 0.0;
    std::vector<double> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double total = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
    return total / static_cast<double>(sa.size());
}

double latent_probe(const AdvaeModel& model, const Matrix& normal_batch, NoiseKind kind,
                    const RngStream& rng) {
    if (normal_batch.rows() == 0) throw DataError("latent_probe: empty batch");
    GaussianParams gp = encode(model, normal_batch);
    const std::size_t draws = model.deterministic_sampler() ? 1 : model.hyper.mc_samples;
    std::vector<RngStream> streams = row_streams(normal_batch, rng);
    std::vector<RngStream> noise_streams;
    noise_streams.reserve(normal_batch.rows());
    for (std::size_t r = 0; r < normal_batch.rows(); ++r)
        noise_streams.push_back(rng.substream(row_content_hash(normal_batch, r) ^ 0x5EEDF00Dull));

    Matrix sum_clean(normal_batch.rows(), normal_batch.cols());
    Matrix sum_noised(normal_batch.rows(), normal_batch.cols());
    Matrix z(normal_batch.rows(), gp.mu.cols());
    for (std::size_t l = 0; l < draws; ++l) {
        if (model.deterministic_sampler()) {
            z = gp.mu;
        } else {
            for (std::size_t r = 0; r < z.rows(); ++r)
                for (std::size_t c = 0; c < z.cols(); ++c)
                    z(r, c) = gp.mu(r, c) + gp.sigma(r, c) * streams[r].normal();
        }
        sum_clean += model.generator.infer(z);
        Matrix z_noised = z;
        apply_noise(z_noised, kind, noise_streams);
        sum_noised += model.generator.infer(z_noised);
    }
    sum_clean *= 1.0 / static_cast<double>(draws);
    sum_noised *= 1.0 / static_cast<double>(draws);
    return wasserstein_1d(row_sq_errors(normal_batch, sum_clean),
                          row_sq_errors(normal_batch, sum_noised));
}

void write_scores_csv(const std::string& path, const std::vector<double>& scores,
                      const std::vector<int>& labels) {
    if (!labels.empty() && labels.size() != scores.size())
        throw InvalidDimensionError("write_scores_csv: label count mismatch");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open scores file " + path);
    std::fprintf(f, "row_id,score%s\n", labels.empty() ? "" : ",label");
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.empty())
            std::fprintf(f, "%zu,%.12g\n", i, scores[i]);
        else
            std::fprintf(f, "%zu,%.12g,%d\n", i, scores[i], labels[i]);
    }
    std::fclose(f);
}

} // namespace advae
