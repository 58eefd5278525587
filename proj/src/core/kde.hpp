#pragma once

#include <string>
#include <vector>

namespace advae {

// h = (m(d+2)/4)^(-1/(d+4))
double silverman_bandwidth(std::size_t m, std::size_t d);

// Gaussian-kernel density over univariate anomaly scores.
class KdeModel {
public:
    explicit KdeModel(std::vector<double> scores);

    double bandwidth() const { return bandwidth_; }
    std::size_t sample_count() const { return scores_.size(); }
    const std::vector<double>& sorted_scores() const { return scores_; }

    double pdf(double s) const;
    double cdf(double s) const;

private:
    std::vector<double> scores_; // sorted
    double bandwidth_ = 0.0;
};

KdeModel fit_kde(const std::vector<double>& scores);

struct ThresholdDecision {
    double alpha = 0.1;
    double threshold = 0.0; // s_alpha
};

// Bisection on the monotone CDF to |F(s_a) - (1 - alpha)| <= 1e-9.
ThresholdDecision solve_threshold(const KdeModel& kde, double alpha);

// Outlier iff score >= s_alpha; non-finite scores are rejected.
bool classify(double score, const ThresholdDecision& decision);

double fraction_at_or_above(const std::vector<double>& scores, double threshold);

void write_threshold_report(const std::string& path, const ThresholdDecision& decision,
                            const KdeModel& kde, double train_fraction_flagged);

} // namespace advae
