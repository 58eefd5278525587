#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace advae {

static void require_paired(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw InvalidDimensionError("metrics: scores/labels length mismatch");
    for (double s : scores)
        if (!std::isfinite(s)) throw DataError("metrics: non-finite score");
}

double average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
    require_paired(scores, labels);
    std::uint64_t total_pos = 0;
    for (int l : labels) total_pos += (l != 0);
    if (total_pos == 0) throw DataError("average_precision: no positive labels");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double ap = 0.0;
    double recall_prev = 0.0;
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Tied scores enter together.
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] != 0) ++tp; else ++fp;
            ++j;
        }
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
        ap += precision * (recall - recall_prev);
        recall_prev = recall;
        i = j;
    }
    return ap;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    require_paired(scores, labels);
    std::uint64_t total_pos = 0, total_neg = 0;
    for (int l : labels) (l != 0 ? total_pos : total_neg) += 1;
    if (total_pos == 0 || total_neg == 0)
        throw DataError("auc: needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // 2 * (concordant pairs) + (tied pairs), exact in integers.
    std::uint64_t twice = 0;
    std::uint64_t negs_below = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::uint64_t pos_here = 0, neg_here = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] != 0) ++pos_here; else ++neg_here;
            ++j;
        }
        twice += pos_here * (2 * negs_below + neg_here);
        negs_below += neg_here;
        i = j;
    }
    return static_cast<double>(twice) / (2.0 * static_cast<double>(total_pos) * static_cast<double>(total_neg));
}

EvalReport confusion_at(const std::vector<double>& scores, const std::vector<int>& labels,
                        double threshold) {
    require_paired(scores, labels);
    if (!std::isfinite(threshold)) throw DataError("confusion_at: non-finite threshold");
    EvalReport report;
    report.threshold = threshold;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool flagged = scores[i] >= threshold;
        const bool positive = labels[i] != 0;
        if (flagged && positive) ++report.counts.tp;
        else if (flagged && !positive) ++report.counts.fp;
        else if (!flagged && positive) ++report.counts.fn;
        else ++report.counts.tn;
    }
    const auto& c = report.counts;
    report.recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    report.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    report.f1 = (report.precision + report.recall > 0.0)
                    ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                    : 0.0;
    return report;
}

} // namespace advae
