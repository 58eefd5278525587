#include "adam.hpp"

#include <cmath>

namespace advae {

AdamState::AdamState(const std::vector<Parameter*>& params, AdamConfig config) : config_(config) {
    param_count_ = params.size();
    first_moment_.reserve(params.size());
    second_moment_.reserve(params.size());
    for (const Parameter* p : params) {
        first_moment_.emplace_back(p->value.rows(), p->value.cols());
        second_moment_.emplace_back(p->value.rows(), p->value.cols());
    }
}

void AdamState::step(const std::vector<Parameter*>& params) {
    if (params.size() != param_count_)
        throw StateError("adam_step: parameter group size changed");
    ++step_count_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        Matrix& m = first_moment_[pi];
        Matrix& v = second_moment_[pi];
        if (!m.same_shape(p.value))
            throw StateError("adam_step: state shape drifted for " + p.name);
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad.at_flat(i);
            m.at_flat(i) = b1 * m.at_flat(i) + (1.0 - b1) * g;
            v.at_flat(i) = b2 * v.at_flat(i) + (1.0 - b2) * g * g;
            const double mhat = m.at_flat(i) / corr1;
            const double vhat = v.at_flat(i) / corr2;
            p.value.at_flat(i) -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
        }
    }
}

} // namespace advae
