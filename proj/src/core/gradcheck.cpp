#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace advae {

GradCheckResult grad_check(const std::vector<Parameter*>& params,
                           const std::function<double()>& loss_and_grad,
                           const std::function<double()>& loss_only,
                           std::size_t coords_per_param, RngStream& rng, double step) {
    for (Parameter* p : params) p->zero_grad();
    loss_and_grad();

    GradCheckResult result;
    for (Parameter* p : params) {
        const std::size_t n = p->value.size();
        std::vector<std::size_t> coords;
        if (coords_per_param == 0 || coords_per_param >= n) {
            coords.resize(n);
            for (std::size_t i = 0; i < n; ++i) coords[i] = i;
        } else {
            for (std::size_t i = 0; i < coords_per_param; ++i)
                coords.push_back(rng.index(n));
        }
        for (std::size_t i : coords) {
            const double saved = p->value.at_flat(i);
            p->value.at_flat(i) = saved + step;
            const double up = loss_only();
            p->value.at_flat(i) = saved - step;
            const double down = loss_only();
            p->value.at_flat(i) = saved;

            const double numeric = (up - down) / (2.0 * step);
            const double analytic = p->grad.at_flat(i);
            const double denom = std::max(std::abs(numeric), 1e-6);
            const double rel = std::abs(analytic - numeric) / denom;
            result.max_rel_err = std::max(result.max_rel_err, rel);
            result.max_abs_analytic = std::max(result.max_abs_analytic, std::abs(analytic));
        }
    }
    return result;
}

} // namespace advae
