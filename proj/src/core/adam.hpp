#pragma once

#include <vector>

#include "dense_net.hpp"

namespace advae {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One optimizer state per disjoint parameter group.
class AdamState {
public:
    AdamState() = default;
    AdamState(const std::vector<Parameter*>& params, AdamConfig config);

    // Standard bias-corrected update. Grads are left untouched; the caller
    // zeroes them.
    void step(const std::vector<Parameter*>& params);

    std::size_t step_count() const { return step_count_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    std::vector<Matrix> first_moment_;
    std::vector<Matrix> second_moment_;
    std::size_t step_count_ = 0;
    std::size_t param_count_ = 0;
};

} // namespace advae
