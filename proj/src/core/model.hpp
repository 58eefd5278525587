#pragma once

#include <string>
#include <vector>

#include "dense_net.hpp"

namespace advae {

enum class Variant { advae, e_advae, g_advae, vae, ae };

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);

struct Hyperparams {
    double lambda = 0.01;
    double gamma = 0.001;
    double margin_mse = 2.0;  // m_x
    double margin_kld = 20.0; // m_z
    std::size_t latent_dim = 2;
    std::size_t mc_samples = 1000; // L
    std::size_t batch_size = 128;
    std::size_t max_iters = 20000;
    std::size_t hidden_width = 0; // 0 = dim(x)
    std::size_t hidden_depth = 3;

    void validate() const;
};

// Per-row Gaussian latent parameters; sigma strictly positive.
struct GaussianParams {
    Matrix mu;
    Matrix sigma;
};

// Encoder E, generator G, Gaussian transformer T.
struct AdvaeModel {
    DenseNet encoder;
    DenseNet generator;
    DenseNet transformer;
    Hyperparams hyper;
    Variant variant = Variant::advae;
    std::size_t data_dim = 0;

    bool uses_transformer() const {
        return variant == Variant::advae || variant == Variant::e_advae || variant == Variant::g_advae;
    }
    bool deterministic_sampler() const { return variant == Variant::ae; }
};

std::size_t default_latent_dim(std::size_t data_dim);

AdvaeModel make_model(std::size_t data_dim, Variant variant, Hyperparams hyper, RngStream& rng);

// Encoder pass kept around for backprop; sigma = exp(logvar / 2).
struct EncodeOut {
    Matrix mu;
    Matrix logvar;
    Matrix sigma;
    ForwardCache cache;

    GaussianParams params() const { return GaussianParams{mu, sigma}; }
};

EncodeOut encode_full(const AdvaeModel& model, const Matrix& x);
GaussianParams encode(const AdvaeModel& model, const Matrix& x);

struct TransformOut {
    Matrix mu_t;
    Matrix logvar_t;
    Matrix sigma_t;
    ForwardCache cache;

    GaussianParams params() const { return GaussianParams{mu_t, sigma_t}; }
};

// T consumes [mu | sigma] and emits the shifted Gaussian parameters.
TransformOut transform_full(const AdvaeModel& model, const GaussianParams& gp);
GaussianParams transform(const AdvaeModel& model, const GaussianParams& gp);

// z^(l) = mu + sigma (.) eps^(l), fresh eps per draw.
std::vector<Matrix> reparameterize(const GaussianParams& gp, RngStream& rng, std::size_t count);

// One latent draw honoring the variant (ae: z = mu).
Matrix sample_latent(const AdvaeModel& model, const GaussianParams& gp, RngStream& rng);

} // namespace advae
