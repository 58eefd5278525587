#include <algorithm>
#include <cmath>

#include "data.hpp"
#include "errors.hpp"

namespace advae {

const std::vector<SynthShape>& synth_shapes() {
    static const std::vector<SynthShape> shapes = {
        {"letter", 1600, 32, 100}, {"cardio", 1831, 21, 176},  {"satellite", 5100, 36, 75},
        {"optical", 5216, 64, 150}, {"pen", 6870, 16, 156},
    };
    return shapes;
}

namespace {

std::uint64_t name_hash(const std::string& name) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char ch : name) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001B3ull;
    }
    return h;
}

// Fixed random one-hidden-layer decoder from intrinsic factors to features.
struct ManifoldMap {
    Matrix a1; // k x w
    Matrix b1; // 1 x w
    Matrix a2; // w x d
    Matrix b2; // 1 x d

    std::vector<double> decode(const std::vector<double>& u) const {
        const std::size_t w = a1.cols(), d = a2.cols();
        std::vector<double> hidden(w, 0.0);
        for (std::size_t j = 0; j < w; ++j) {
            double acc = b1(0, j);
            for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * a1(i, j);
            hidden[j] = std::tanh(acc);
        }
        std::vector<double> x(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            double acc = b2(0, j);
            for (std::size_t i = 0; i < w; ++i) acc += hidden[i] * a2(i, j);
            x[j] = acc;
        }
        return x;
    }
};

Matrix random_matrix(RngStream& rng, std::size_t rows, std::size_t cols, double scale) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.at_flat(i) = scale * rng.normal();
    return m;
}

struct ShapeTuning {
    double magnitude_lo;
    double magnitude_hi;
};

ShapeTuning tuning_for(const std::string& name) {
    if (name == "pen") return {0.45, 1.00};
    if (name == "cardio") return {0.40, 0.90};
    if (name == "optical") return {0.45, 1.00};
    if (name == "letter") return {0.50, 1.10};
    return {0.50, 1.10}; // satellite
}

} // namespace

Dataset synth_dataset(const std::string& name, std::uint64_t seed) {
    const SynthShape* shape = nullptr;
    for (const SynthShape& s : synth_shapes())
        if (s.name == name) shape = &s;
    if (!shape) throw DataError("no synthetic shape named '" + name + "'");

    RngStream rng(name_hash(name) ^ (seed * 0x9E3779B97F4A7C15ull));
    const std::size_t d = shape->dims;
    const std::size_t k = std::max<std::size_t>(2, (d + 4) / 5);
    const std::size_t n_anom = shape->anomalies;
    const std::size_t n_norm = shape->rows - n_anom;
    const ShapeTuning tune = tuning_for(name);

    ManifoldMap map;
    map.a1 = random_matrix(rng, k, d, 1.0 / std::sqrt(static_cast<double>(k)));
    map.b1 = random_matrix(rng, 1, d, 0.3);
    map.a2 = random_matrix(rng, d, d, 1.0 / std::sqrt(static_cast<double>(d)));
    map.b2 = random_matrix(rng, 1, d, 0.2);

    // A handful of latent modes, like digit or letter classes.
    const std::size_t n_modes = 5;
    std::vector<std::vector<double>> modes(n_modes, std::vector<double>(k, 0.0));
    for (auto& mode : modes)
        for (double& v : mode) v = 1.6 * rng.normal();

    auto draw_normal_latent = [&](RngStream& r) {
        const std::vector<double>& mode = modes[r.index(n_modes)];
        std::vector<double> u(k);
        for (std::size_t i = 0; i < k; ++i) u[i] = mode[i] + 0.45 * r.normal();
        return u;
    };

    std::vector<std::vector<double>> normal_rows;
    normal_rows.reserve(n_norm);
    for (std::size_t i = 0; i < n_norm; ++i)
        normal_rows.push_back(map.decode(draw_normal_latent(rng)));

    // Feature scale sets both measurement noise and anomaly offsets.
    std::vector<double> feat_std(d, 0.0), feat_mean(d, 0.0);
    for (const auto& row : normal_rows)
        for (std::size_t c = 0; c < d; ++c) feat_mean[c] += row[c];
    for (double& v : feat_mean) v /= static_cast<double>(n_norm);
    for (const auto& row : normal_rows)
        for (std::size_t c = 0; c < d; ++c) {
            const double dv = row[c] - feat_mean[c];
            feat_std[c] += dv * dv;
        }
    for (double& v : feat_std) v = std::sqrt(v / static_cast<double>(n_norm)) + 1e-9;

    for (auto& row : normal_rows)
        for (std::size_t c = 0; c < d; ++c) row[c] += 0.02 * feat_std[c] * rng.normal();

    // Anomalies form a few tight clusters just off the manifold.
    const std::size_t n_clusters = 4;
    std::vector<std::vector<double>> anomaly_rows;
    anomaly_rows.reserve(n_anom);
    for (std::size_t cl = 0; cl < n_clusters; ++cl) {
        std::vector<double> base_u = draw_normal_latent(rng);
        std::vector<double> dir(d);
        double norm = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            dir[c] = rng.normal();
            norm += dir[c] * dir[c];
        }
        norm = std::sqrt(norm);
        for (double& v : dir) v /= norm;
        const double magnitude = rng.uniform(tune.magnitude_lo, tune.magnitude_hi);

        const std::size_t count = n_anom / n_clusters + (cl < n_anom % n_clusters ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<double> u = base_u;
            for (double& v : u) v += 0.2 * rng.normal();
            std::vector<double> row = map.decode(u);
            const double mag = magnitude * (1.0 + 0.15 * rng.normal());
            for (std::size_t c = 0; c < d; ++c) {
                row[c] += mag * dir[c] * feat_std[c];
                row[c] += 0.02 * feat_std[c] * rng.normal();
            }
            anomaly_rows.push_back(std::move(row));
        }
    }

    // Interleave deterministically.
    std::vector<int> order_labels(shape->rows, 0);
    for (std::size_t i = 0; i < n_anom; ++i) order_labels[i] = 1;
    for (std::size_t i = order_labels.size(); i > 1; --i)
        std::swap(order_labels[i - 1], order_labels[rng.index(i)]);

    Dataset ds;
    ds.name = name;
    ds.provenance = "synthetic stand-in (" + name + " shape), seed " + std::to_string(seed);
    ds.features = Matrix(shape->rows, d);
    ds.labels.reserve(shape->rows);
    std::size_t ni = 0, ai = 0;
    for (std::size_t r = 0; r < shape->rows; ++r) {
        const std::vector<double>& row = order_labels[r] ? anomaly_rows[ai++] : normal_rows[ni++];
        for (std::size_t c = 0; c < d; ++c) ds.features(r, c) = row[c];
        ds.labels.push_back(order_labels[r]);
    }
    return ds;
}

} // namespace advae
