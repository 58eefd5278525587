#pragma once

#include <string>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace advae {

struct Dataset {
    std::string name;
    Matrix features; // m x d
    std::vector<int> labels; // 0 normal, 1 anomaly
    std::string provenance;

    std::size_t rows() const { return features.rows(); }
    std::size_t dims() const { return features.cols(); }
    std::size_t anomaly_count() const;
};

// Per-feature min/max from training rows; transform maps train into [0, 1].
struct Scaler {
    std::vector<double> min;
    std::vector<double> max;
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
    double contamination_ratio = 0.0; // in [0, 0.1]

    void validate() const;
};

struct RawSplit {
    Dataset train;
    Dataset test;
    std::size_t contamination_moved = 0;
    double contamination_achieved = 0.0;
};

struct SplitResult {
    Dataset train;
    Dataset test;
    Scaler scaler;
    std::size_t contamination_moved = 0;
    double contamination_achieved = 0.0;
    std::size_t clipped_test_rows = 0;
};

// label_column: a column name (requires a header) or a zero-based index.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& name = "");

// Shuffles normals by seed; train_fraction of them train, the rest plus all
// anomalies test. With contamination, anomalies move from test to train (the
// count is capped at half the anomaly pool so the test set keeps positives).
RawSplit split_raw(const Dataset& dataset, const SplitSpec& spec);

// split_raw plus a scaler fit on the final train rows, applied to both sides.
SplitResult split(const Dataset& dataset, const SplitSpec& spec);

Scaler fit_scaler(const Matrix& train_rows);
// (x - min) / (max - min); constant features map to 0.5; output clipped to
// [-0.05, 1.05] with the clipped-row count reported.
Matrix apply_scaler(const Scaler& scaler, const Matrix& x, std::size_t* clipped_rows = nullptr);

struct ManifestEntry {
    std::string name;
    std::string path;
    std::string label_column;
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::size_t anomalies = 0; // 0 = not validated
};

std::vector<ManifestEntry> load_manifest(const std::string& path);
// Resolves an entry by name, loads its CSV (paths relative to the manifest),
// and validates the expected shape.
Dataset load_from_manifest(const std::string& manifest_path, const std::string& name);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

// --- synthetic benchmark-shaped stand-ins ---

struct SynthShape {
    std::string name;
    std::size_t rows;
    std::size_t dims;
    std::size_t anomalies;
};

// letter / cardio / satellite / optical / pen shapes.
const std::vector<SynthShape>& synth_shapes();

// Deterministic manifold-structured dataset matching the named shape.
Dataset synth_dataset(const std::string& name, std::uint64_t seed);

void write_csv(const Dataset& dataset, const std::string& path);

} // namespace advae
