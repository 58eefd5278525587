#pragma once

#include <string>
#include <vector>

#include "adam.hpp"
#include "losses.hpp"

namespace advae {

struct TrainConfig {
    std::size_t max_iters = 20000;
    std::size_t batch_size = 128;
    std::uint64_t seed = 1;
    AdamConfig optimizer;
    std::size_t log_every = 200;
    // Verify freeze/detach weight hashes at every logged iteration.
    bool check_contracts = true;
};

struct TraceRow {
    std::size_t iteration = 0;
    LossBreakdown losses;
};

struct TrainTrace {
    std::vector<TraceRow> rows;
    double seconds_step_one = 0.0;
    double seconds_step_two = 0.0;

    void write_csv(const std::string& path) const;
};

// Disjoint optimizer groups per the alternating scheme; vae/ae use the joint
// group instead.
struct AdvaeOptimizers {
    AdamState gen_trans; // {theta_G, delta_T}
    AdamState enc;       // {phi_E}
    AdamState joint;     // {phi_E, theta_G}
};

AdvaeOptimizers make_optimizers(AdvaeModel& model, const AdamConfig& config);

std::vector<Parameter*> gen_trans_params(AdvaeModel& model);
std::vector<Parameter*> encoder_params(AdvaeModel& model);
std::vector<Parameter*> joint_params(AdvaeModel& model);
std::vector<Parameter*> all_params(AdvaeModel& model);

// Updates {G, T}; the encoder stays bit-identical. When carry_out is given,
// the sampled z / z_T are stored there for reuse by step two.
LossBreakdown train_step_one(AdvaeModel& model, const Matrix& batch, AdvaeOptimizers& opt,
                             RngStream& rng, StepOneData* carry_out = nullptr);

// Updates the encoder; {G, T} stay bit-identical. With no carry, z_T is
// resampled through the current transformer.
LossBreakdown train_step_two(AdvaeModel& model, const Matrix& batch, AdvaeOptimizers& opt,
                             RngStream& rng, const StepOneData* carry = nullptr);

// Alternating (or single-objective) training over uniformly resampled
// mini-batches. Pure function of (initial weights, train_x, config).
TrainTrace fit(AdvaeModel& model, const Matrix& train_x, const TrainConfig& config);

} // namespace advae
