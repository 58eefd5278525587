#include "runner.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace advae {

ModelArtifact train_run(const Dataset& dataset, const RunConfig& config, TrainTrace* trace_out) {
    SplitResult parts = split(dataset, config.split);

    ModelArtifact artifact;
    RngStream init_rng(config.train.seed);
    artifact.model = make_model(dataset.dims(), config.variant, config.hyper, init_rng);
    artifact.scaler = parts.scaler;
    artifact.split = config.split;
    artifact.dataset_name = dataset.name;
    artifact.train_seed = config.train.seed;
    artifact.score_seed = config.score_seed;

    TrainTrace trace = fit(artifact.model, parts.train.features, config.train);
    if (trace_out) *trace_out = std::move(trace);
    return artifact;
}

SideScores score_split_side(const ModelArtifact& artifact, const Dataset& raw_dataset, bool test_side,
                            std::uint64_t score_seed) {
    RawSplit raw = split_raw(raw_dataset, artifact.split);
    const Dataset& side = test_side ? raw.test : raw.train;
    SideScores out;
    Matrix scaled = apply_scaler(artifact.scaler, side.features);
    RngStream rng(score_seed);
    out.scores = anomaly_scores(artifact.model, scaled, rng, &out.out_of_range_rows);
    out.labels = side.labels;
    return out;
}

EvalOutcome evaluate_artifact(const ModelArtifact& artifact, const Dataset& raw_dataset, double alpha,
                              std::uint64_t score_seed) {
    EvalOutcome outcome;
    outcome.train = score_split_side(artifact, raw_dataset, false, score_seed);
    outcome.test = score_split_side(artifact, raw_dataset, true, score_seed);

    KdeModel kde = fit_kde(outcome.train.scores);
    outcome.decision = solve_threshold(kde, alpha);
    outcome.kde_bandwidth = kde.bandwidth();
    outcome.kde_sample_count = kde.sample_count();
    outcome.train_fraction_flagged = fraction_at_or_above(outcome.train.scores, outcome.decision.threshold);

    outcome.report = confusion_at(outcome.test.scores, outcome.test.labels, outcome.decision.threshold);
    bool has_pos = false, has_neg = false;
    for (int l : outcome.test.labels) (l != 0 ? has_pos : has_neg) = true;
    outcome.report.has_ranking_metrics = has_pos && has_neg;
    if (outcome.report.has_ranking_metrics) {
        outcome.report.ap = average_precision(outcome.test.scores, outcome.test.labels);
        outcome.report.auc = auc(outcome.test.scores, outcome.test.labels);
    }
    return outcome;
}

std::vector<ProbeResult> probe_artifact(const ModelArtifact& artifact, const Dataset& raw_dataset,
                                        std::size_t sample_rows, std::uint64_t score_seed) {
    RawSplit raw = split_raw(raw_dataset, artifact.split);
    std::vector<std::size_t> normal_rows;
    for (std::size_t r = 0; r < raw.test.rows() && normal_rows.size() < sample_rows; ++r)
        if (raw.test.labels[r] == 0) normal_rows.push_back(r);
    if (normal_rows.empty()) throw DataError("probe: no normal test rows");

    Matrix sample(normal_rows.size(), raw.test.dims());
    for (std::size_t i = 0; i < normal_rows.size(); ++i)
        for (std::size_t c = 0; c < raw.test.dims(); ++c)
            sample(i, c) = raw.test.features(normal_rows[i], c);
    sample = apply_scaler(artifact.scaler, sample);

    RngStream rng(score_seed);
    std::vector<ProbeResult> results;
    for (NoiseKind kind : probe_noise_kinds())
        results.push_back(ProbeResult{kind, latent_probe(artifact.model, sample, kind, rng)});
    return results;
}

void write_metric_csv(const std::string& path, const std::vector<MetricRow>& rows) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open metric report " + path);
    std::fprintf(f, "dataset,variant,seed,alpha,threshold,ap,auc,recall,precision,f1,"
                    "tp,fp,tn,fn,train_fraction_flagged,kde_h,kde_m,status\n");
    for (const MetricRow& row : rows) {
        if (row.failed) {
            std::fprintf(f, "%s,%s,%llu,%.12g,,,,,,,,,,,,,,failed:%s\n", row.dataset.c_str(),
                         row.variant.c_str(), static_cast<unsigned long long>(row.seed), row.alpha,
                         row.failure.c_str());
            continue;
        }
        const EvalOutcome& e = row.outcome;
        if (e.report.has_ranking_metrics)
            std::fprintf(f, "%s,%s,%llu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                            "%llu,%llu,%llu,%llu,%.12g,%.12g,%zu,ok\n",
                         row.dataset.c_str(), row.variant.c_str(),
                         static_cast<unsigned long long>(row.seed), row.alpha, e.decision.threshold,
                         e.report.ap, e.report.auc, e.report.recall, e.report.precision, e.report.f1,
                         static_cast<unsigned long long>(e.report.counts.tp),
                         static_cast<unsigned long long>(e.report.counts.fp),
                         static_cast<unsigned long long>(e.report.counts.tn),
                         static_cast<unsigned long long>(e.report.counts.fn),
                         e.train_fraction_flagged, e.kde_bandwidth, e.kde_sample_count);
        else
            std::fprintf(f, "%s,%s,%llu,%.12g,%.12g,,,%.12g,%.12g,%.12g,"
                            "%llu,%llu,%llu,%llu,%.12g,%.12g,%zu,ok_no_ranking_labels\n",
                         row.dataset.c_str(), row.variant.c_str(),
                         static_cast<unsigned long long>(row.seed), row.alpha, e.decision.threshold,
                         e.report.recall, e.report.precision, e.report.f1,
                         static_cast<unsigned long long>(e.report.counts.tp),
                         static_cast<unsigned long long>(e.report.counts.fp),
                         static_cast<unsigned long long>(e.report.counts.tn),
                         static_cast<unsigned long long>(e.report.counts.fn),
                         e.train_fraction_flagged, e.kde_bandwidth, e.kde_sample_count);
    }
    std::fclose(f);
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_metric_markdown(const std::string& path, const std::vector<MetricRow>& rows) {
    struct Agg {
        std::vector<double> ap, auc, recall, precision, f1;
        std::size_t failures = 0;
        std::size_t seeds = 0;
    };
    std::map<std::pair<std::string, std::string>, Agg> groups;
    for (const MetricRow& row : rows) {
        Agg& agg = groups[{row.dataset, row.variant}];
        ++agg.seeds;
        if (row.failed) {
            ++agg.failures;
            continue;
        }
        agg.ap.push_back(row.outcome.report.ap);
        agg.auc.push_back(row.outcome.report.auc);
        agg.recall.push_back(row.outcome.report.recall);
        agg.precision.push_back(row.outcome.report.precision);
        agg.f1.push_back(row.outcome.report.f1);
    }

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open metric summary " + path);
    std::fprintf(f, "| Dataset | Method | AP | AUC | Recall | Precision | F1 | Seeds |\n");
    std::fprintf(f, "|---|---|---|---|---|---|---|---|\n");
    for (const auto& [key, agg] : groups) {
        if (agg.ap.empty()) {
            std::fprintf(f, "| %s | %s | - | - | - | - | - | %zu (all failed) |\n", key.first.c_str(),
                         key.second.c_str(), agg.seeds);
            continue;
        }
        const std::string note = agg.failures ? " (" + std::to_string(agg.failures) + " failed)" : "";
        std::fprintf(f, "| %s | %s | %.3f | %.3f | %.3f | %.3f | %.3f | %zu%s |\n", key.first.c_str(),
                     key.second.c_str(), median(agg.ap), median(agg.auc), median(agg.recall),
                     median(agg.precision), median(agg.f1), agg.seeds, note.c_str());
    }
    std::fclose(f);
}

void write_latents_csv(const std::string& path, const Matrix& mu, const std::vector<int>& labels) {
    if (!labels.empty() && labels.size() != mu.rows())
        throw InvalidDimensionError("write_latents_csv: label count mismatch");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open latents file " + path);
    std::fprintf(f, "row_id");
    for (std::size_t c = 0; c < mu.cols(); ++c) std::fprintf(f, ",z%zu", c);
    if (!labels.empty()) std::fprintf(f, ",label");
    std::fprintf(f, "\n");
    for (std::size_t r = 0; r < mu.rows(); ++r) {
        std::fprintf(f, "%zu", r);
        for (std::size_t c = 0; c < mu.cols(); ++c) std::fprintf(f, ",%.12g", mu(r, c));
        if (!labels.empty()) std::fprintf(f, ",%d", labels[r]);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

} // namespace advae
