#pragma once

#include "config.hpp"
#include "kde.hpp"
#include "metrics.hpp"
#include "score.hpp"
#include "serialize.hpp"

namespace advae {

// Splits, scales, trains, and stamps the artifact with its provenance.
ModelArtifact train_run(const Dataset& dataset, const RunConfig& config, TrainTrace* trace_out = nullptr);

struct SideScores {
    std::vector<double> scores;
    std::vector<int> labels;
    std::size_t out_of_range_rows = 0;
};

// Scores one side of the artifact's split, normalized with its scaler.
SideScores score_split_side(const ModelArtifact& artifact, const Dataset& raw_dataset, bool test_side,
                            std::uint64_t score_seed);

struct EvalOutcome {
    EvalReport report;
    ThresholdDecision decision;
    double kde_bandwidth = 0.0;
    std::size_t kde_sample_count = 0;
    double train_fraction_flagged = 0.0;
    SideScores train;
    SideScores test;
};

// Full evaluation: KDE threshold from training scores, then AP / AUC /
// recall / precision / F1 on the test side.
EvalOutcome evaluate_artifact(const ModelArtifact& artifact, const Dataset& raw_dataset, double alpha,
                              std::uint64_t score_seed);

struct ProbeResult {
    NoiseKind kind;
    double distance = 0.0;
};

// Generator-sensitivity probe over the five noise kinds on normal test rows.
std::vector<ProbeResult> probe_artifact(const ModelArtifact& artifact, const Dataset& raw_dataset,
                                        std::size_t sample_rows, std::uint64_t score_seed);

struct MetricRow {
    std::string dataset;
    std::string variant;
    std::uint64_t seed = 0;
    double alpha = 0.1;
    EvalOutcome outcome;
    bool failed = false;
    std::string failure;
};

void write_metric_csv(const std::string& path, const std::vector<MetricRow>& rows);
// Markdown summary: per (dataset, variant) medians across seeds.
void write_metric_markdown(const std::string& path, const std::vector<MetricRow>& rows);

// mu coordinates per row for external latent-space plots.
void write_latents_csv(const std::string& path, const Matrix& mu, const std::vector<int>& labels);

double median(std::vector<double> values);

} // namespace advae
