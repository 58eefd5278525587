#pragma once

#include <functional>
#include <vector>

#include "dense_net.hpp"
#include "rng.hpp"

namespace advae {

struct GradCheckResult {
    double max_rel_err = 0.0;
    double max_abs_analytic = 0.0;
    bool passed(double tolerance) const { return max_rel_err <= tolerance; }
};

// Compares analytic gradients against central finite differences.
//
// loss_and_grad: zeroes nothing itself; must accumulate fresh grads into the
// given params and return the scalar loss. It is called once on unperturbed
// params (after zeroing) to collect analytic grads.
// loss_only: re-evaluates the loss at the current param values without
// touching grads. Must be deterministic (fix any noise outside the closure).
// coords_per_param: 0 means every coordinate.
GradCheckResult grad_check(const std::vector<Parameter*>& params,
                           const std::function<double()>& loss_and_grad,
                           const std::function<double()>& loss_only,
                           std::size_t coords_per_param, RngStream& rng,
                           double step = 1e-5);

} // namespace advae
