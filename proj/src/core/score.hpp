#pragma once

#include <vector>

#include "model.hpp"

namespace advae {

enum class NoiseKind {
    none, // control perturbation
    uniform01_add,
    gaussian01_add,
    const_half_add,
    scale_last_half_by_half,
    zero_first_half,
};

NoiseKind parse_noise_kind(const std::string& s);
std::string noise_kind_name(NoiseKind kind);
// The five perturbations of the generator-sensitivity probe.
const std::vector<NoiseKind>& probe_noise_kinds();

// s_i = || x_i - mean_l G(z_i^(l)) ||^2 with L = hyper.mc_samples draws
// (a single deterministic pass for the ae variant). Each row draws from a
// substream keyed by its content, so scores are permutation-equivariant.
// out_of_range, when given, receives the count of rows outside the scaled
// data range (reported as a warning by callers, never an error).
std::vector<double> anomaly_scores(const AdvaeModel& model, const Matrix& x, const RngStream& rng,
                                   std::size_t* out_of_range = nullptr);

// Empirical 1-D W1: mean absolute difference of sorted samples.
double wasserstein_1d(const std::vector<double>& a, const std::vector<double>& b);

// Scores a normal batch twice through G with clean and perturbed latent
// draws (encoder fixed) and returns their Wasserstein distance.
double latent_probe(const AdvaeModel& model, const Matrix& normal_batch, NoiseKind kind,
                    const RngStream& rng);

void write_scores_csv(const std::string& path, const std::vector<double>& scores,
                      const std::vector<int>& labels);

} // namespace advae
