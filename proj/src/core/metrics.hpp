#pragma once

#include <cstdint>
#include <vector>

namespace advae {

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct EvalReport {
    double ap = 0.0;
    double auc = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    ConfusionCounts counts;
    double threshold = 0.0;
    bool has_ranking_metrics = true; // false when the labels cannot support AP/AUC
};

// AP = sum_n P_n * dR_n over thresholds stepping through distinct scores,
// anomalies (label 1) positive. Requires at least one positive.
double average_precision(const std::vector<double>& scores, const std::vector<int>& labels);

// Mann-Whitney statistic; ties count one half. Requires both classes.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Predict anomaly iff score >= threshold.
EvalReport confusion_at(const std::vector<double>& scores, const std::vector<int>& labels,
                        double threshold);

} // namespace advae
