#pragma once

#include <string>
#include <utility>
#include <vector>

#include "data.hpp"
#include "train.hpp"

namespace advae {

// Everything one training/evaluation run needs. Precedence when building:
// built-in per-dataset defaults, then config-file pairs, then flag pairs.
struct RunConfig {
    std::string dataset;
    Variant variant = Variant::advae;
    Hyperparams hyper;
    TrainConfig train;
    SplitSpec split;
    double alpha = 0.1;
    std::uint64_t score_seed = 9001;
};

// Per-dataset hyperparameters (lambda, m_z, m_x, gamma); latent_dim and
// hidden_width stay 0 (resolved from the data dimension at model build).
RunConfig default_run_config(const std::string& dataset_name);

// Applies one "key=value" override; unknown keys are usage errors.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

// Flat key=value lines; '#' comments and blank lines ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

RunConfig resolve_run_config(const std::string& dataset_name,
                             const std::vector<std::pair<std::string, std::string>>& overrides);

} // namespace advae
