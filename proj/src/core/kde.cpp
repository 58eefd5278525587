#include "kde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace advae {

double silverman_bandwidth(std::size_t m, std::size_t d) {
    if (m == 0) throw DataError("silverman_bandwidth: m = 0");
    if (d == 0) throw DataError("silverman_bandwidth: d = 0");
    const double base = static_cast<double>(m) * (static_cast<double>(d) + 2.0) / 4.0;
    return std::pow(base, -1.0 / (static_cast<double>(d) + 4.0));
}

KdeModel::KdeModel(std::vector<double> scores) : scores_(std::move(scores)) {
    if (scores_.empty()) throw DataError("fit_kde: empty scores");
    for (double s : scores_)
        if (!std::isfinite(s)) throw DataError("fit_kde: non-finite score");
    std::sort(scores_.begin(), scores_.end());
    bandwidth_ = silverman_bandwidth(scores_.size(), 1);
}

KdeModel fit_kde(const std::vector<double>& scores) { return KdeModel(scores); }

double KdeModel::pdf(double s) const {
    const double inv_norm = 1.0 / (static_cast<double>(scores_.size()) * bandwidth_ *
                                   std::sqrt(2.0 * 3.14159265358979323846));
    double total = 0.0;
    for (double si : scores_) {
        const double u = (s - si) / bandwidth_;
        total += std::exp(-0.5 * u * u);
    }
    return total * inv_norm;
}

static double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

double KdeModel::cdf(double s) const {
    double total = 0.0;
    for (double si : scores_) total += std_normal_cdf((s - si) / bandwidth_);
    return total / static_cast<double>(scores_.size());
}

ThresholdDecision solve_threshold(const KdeModel& kde, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw UsageError("alpha must lie in (0, 1)");
    const double target = 1.0 - alpha;
    const double h = kde.bandwidth();
    double lo = kde.sorted_scores().front() - 10.0 * h;
    double hi = kde.sorted_scores().back() + 10.0 * h;
    double span = hi - lo;
    while (kde.cdf(lo) > target) {
        lo -= span;
        span *= 2.0;
    }
    span = hi - lo;
    while (kde.cdf(hi) < target) {
        hi += span;
        span *= 2.0;
    }
    for (int it = 0; it < 500; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = kde.cdf(mid);
        if (std::abs(f - target) <= 1e-9) return ThresholdDecision{alpha, mid};
        if (f < target) lo = mid; else hi = mid;
    }
    return ThresholdDecision{alpha, 0.5 * (lo + hi)};
}

bool classify(double score, const ThresholdDecision& decision) {
    if (!std::isfinite(score)) throw DataError("classify: non-finite score");
    return score >= decision.threshold;
}

double fraction_at_or_above(const std::vector<double>& scores, double threshold) {
    if (scores.empty()) return 0.0;
    std::size_t count = 0;
    for (double s : scores)
        if (s >= threshold) ++count;
    return static_cast<double>(count) / static_cast<double>(scores.size());
}

void write_threshold_report(const std::string& path, const ThresholdDecision& decision,
                            const KdeModel& kde, double train_fraction_flagged) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open threshold report " + path);
    std::fprintf(f, "alpha,h,m,s_alpha,train_fraction_flagged\n");
    std::fprintf(f, "%.12g,%.12g,%zu,%.12g,%.12g\n", decision.alpha, kde.bandwidth(),
                 kde.sample_count(), decision.threshold, train_fraction_flagged);
    std::fclose(f);
}

} // namespace advae
