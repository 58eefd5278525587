#include "data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "json.hpp"

namespace advae {

std::size_t Dataset::anomaly_count() const {
    std::size_t n = 0;
    for (int l : labels) n += (l != 0);
    return n;
}

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw UsageError("train_fraction must lie in (0, 1)");
    if (contamination_ratio < 0.0 || contamination_ratio > 0.1)
        throw UsageError("contamination_ratio must lie in [0, 0.1]");
}

static std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

static bool parse_double(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end != '\0') {
        if (!std::isspace(static_cast<unsigned char>(*end))) return false;
        ++end;
    }
    return std::isfinite(out);
}

Dataset load_csv(const std::string& path, const std::string& label_column, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file " + path);

    std::string line;
    std::size_t line_no = 0;
    // First non-empty line decides header vs data.
    do {
        if (!std::getline(in, line)) throw DataError("empty dataset file " + path);
        ++line_no;
    } while (line.empty());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> first = split_fields(line);
    double probe;
    const bool has_header = !parse_double(first[0], probe);

    long label_idx = -1;
    std::size_t n_cols = first.size();
    if (has_header) {
        for (std::size_t i = 0; i < first.size(); ++i)
            if (first[i] == label_column) label_idx = static_cast<long>(i);
        if (label_idx < 0) {
            // A numeric label_column indexes headered files too.
            try {
                label_idx = std::stol(label_column);
            } catch (...) {
                throw DataError("label column '" + label_column + "' not found in header of " + path);
            }
        }
    } else {
        try {
            label_idx = std::stol(label_column);
        } catch (...) {
            throw DataError("headerless CSV needs a numeric label column index, got '" + label_column + "'");
        }
    }
    if (label_idx < 0 || static_cast<std::size_t>(label_idx) >= n_cols)
        throw DataError("label column index " + std::to_string(label_idx) + " out of range");

    Dataset ds;
    ds.name = name.empty() ? path : name;
    ds.provenance = "loaded from " + path;
    std::vector<double> values;
    std::size_t rows = 0;
    const std::size_t d = n_cols - 1;

    auto parse_row = [&](const std::vector<std::string>& fields, std::size_t lineno) {
        if (fields.size() != n_cols)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(n_cols) +
                            " fields, got " + std::to_string(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            double v;
            if (!parse_double(fields[i], v))
                throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric field '" + fields[i] + "'");
            if (static_cast<long>(i) == label_idx) {
                if (v != 0.0 && v != 1.0)
                    throw DataError(path + ":" + std::to_string(lineno) + ": label must be 0 or 1");
                ds.labels.push_back(static_cast<int>(v));
            } else {
                values.push_back(v);
            }
        }
        ++rows;
    };

    if (!has_header) parse_row(first, line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        parse_row(split_fields(line), line_no);
    }
    if (rows == 0) throw DataError("no data rows in " + path);
    ds.features = Matrix::from_values(rows, d, std::move(values));
    return ds;
}

Scaler fit_scaler(const Matrix& train_rows) {
    if (train_rows.rows() == 0) throw DataError("fit_scaler: no rows");
    Scaler s;
    s.min.assign(train_rows.cols(), 0.0);
    s.max.assign(train_rows.cols(), 0.0);
    for (std::size_t c = 0; c < train_rows.cols(); ++c) {
        double lo = train_rows(0, c), hi = train_rows(0, c);
        for (std::size_t r = 1; r < train_rows.rows(); ++r) {
            lo = std::min(lo, train_rows(r, c));
            hi = std::max(hi, train_rows(r, c));
        }
        s.min[c] = lo;
        s.max[c] = hi;
    }
    return s;
}

Matrix apply_scaler(const Scaler& scaler, const Matrix& x, std::size_t* clipped_rows) {
    if (x.cols() != scaler.min.size())
        throw InvalidDimensionError("apply_scaler: feature count mismatch");
    Matrix out(x.rows(), x.cols());
    std::size_t clipped = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        bool row_clipped = false;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            const double range = scaler.max[c] - scaler.min[c];
            double v = range > 0.0 ? (x(r, c) - scaler.min[c]) / range : 0.5;
            if (v < -0.05) { v = -0.05; row_clipped = true; }
            if (v > 1.05) { v = 1.05; row_clipped = true; }
            out(r, c) = v;
        }
        clipped += row_clipped;
    }
    if (clipped_rows) *clipped_rows = clipped;
    return out;
}

static Dataset gather(const Dataset& src, const std::vector<std::size_t>& rows, const std::string& tag) {
    Dataset out;
    out.name = src.name;
    out.provenance = src.provenance + " [" + tag + "]";
    out.features = Matrix(rows.size(), src.dims());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < src.dims(); ++c) out.features(i, c) = src.features(rows[i], c);
        out.labels.push_back(src.labels[rows[i]]);
    }
    return out;
}

RawSplit split_raw(const Dataset& dataset, const SplitSpec& spec) {
    spec.validate();
    if (dataset.labels.size() != dataset.rows())
        throw DataError("split: labels missing");

    std::vector<std::size_t> normals, anomalies;
    for (std::size_t i = 0; i < dataset.rows(); ++i)
        (dataset.labels[i] == 0 ? normals : anomalies).push_back(i);
    if (normals.size() < 10) throw DataError("split: fewer than 10 normal rows");

    RngStream rng(spec.seed);
    for (std::size_t i = normals.size(); i > 1; --i)
        std::swap(normals[i - 1], normals[rng.index(i)]);
    for (std::size_t i = anomalies.size(); i > 1; --i)
        std::swap(anomalies[i - 1], anomalies[rng.index(i)]);

    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(normals.size())));
    std::vector<std::size_t> train_rows(normals.begin(), normals.begin() + n_train);
    std::vector<std::size_t> test_rows(normals.begin() + n_train, normals.end());

    RawSplit result;
    if (spec.contamination_ratio > 0.0 && !anomalies.empty()) {
        const double r = spec.contamination_ratio;
        std::size_t want = static_cast<std::size_t>(
            std::llround(r / (1.0 - r) * static_cast<double>(n_train)));
        const std::size_t cap = anomalies.size() / 2;
        result.contamination_moved = std::min(want, cap);
    }
    for (std::size_t i = 0; i < result.contamination_moved; ++i) train_rows.push_back(anomalies[i]);
    for (std::size_t i = result.contamination_moved; i < anomalies.size(); ++i)
        test_rows.push_back(anomalies[i]);
    result.contamination_achieved =
        train_rows.empty() ? 0.0
                           : static_cast<double>(result.contamination_moved) /
                                 static_cast<double>(train_rows.size());

    result.train = gather(dataset, train_rows, "train");
    result.test = gather(dataset, test_rows, "test");
    return result;
}

SplitResult split(const Dataset& dataset, const SplitSpec& spec) {
    RawSplit raw = split_raw(dataset, spec);
    SplitResult result;
    result.contamination_moved = raw.contamination_moved;
    result.contamination_achieved = raw.contamination_achieved;
    result.train = std::move(raw.train);
    result.test = std::move(raw.test);
    result.scaler = fit_scaler(result.train.features);
    result.train.features = apply_scaler(result.scaler, result.train.features);
    result.test.features = apply_scaler(result.scaler, result.test.features, &result.clipped_test_rows);
    return result;
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw DataError("manifest parse error in " + path + ": " + e.what());
    }
    if (!doc.is_array()) throw DataError("manifest must be a JSON array");
    std::vector<ManifestEntry> entries;
    for (const auto& item : doc) {
        ManifestEntry e;
        e.name = item.at("name").get<std::string>();
        e.path = item.at("path").get<std::string>();
        e.label_column = item.at("label_column").get<std::string>();
        e.rows = item.at("rows").get<std::size_t>();
        e.dims = item.at("dims").get<std::size_t>();
        if (item.contains("anomalies")) e.anomalies = item.at("anomalies").get<std::size_t>();
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ManifestEntry& e : entries) {
        doc.push_back({{"name", e.name},
                       {"path", e.path},
                       {"label_column", e.label_column},
                       {"rows", e.rows},
                       {"dims", e.dims},
                       {"anomalies", e.anomalies}});
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write manifest " + path);
    out << doc.dump(2) << "\n";
}

Dataset load_from_manifest(const std::string& manifest_path, const std::string& name) {
    const std::vector<ManifestEntry> entries = load_manifest(manifest_path);
    for (const ManifestEntry& e : entries) {
        if (e.name != name) continue;
        std::string csv_path = e.path;
        if (!csv_path.empty() && csv_path[0] != '/') {
            const std::size_t slash = manifest_path.find_last_of('/');
            if (slash != std::string::npos) csv_path = manifest_path.substr(0, slash + 1) + csv_path;
        }
        Dataset ds = load_csv(csv_path, e.label_column, e.name);
        if (ds.rows() != e.rows || ds.dims() != e.dims)
            throw DataError("dataset " + name + " shape " + std::to_string(ds.rows()) + "x" +
                            std::to_string(ds.dims()) + " does not match manifest " +
                            std::to_string(e.rows) + "x" + std::to_string(e.dims));
        if (e.anomalies != 0 && ds.anomaly_count() != e.anomalies)
            throw DataError("dataset " + name + " anomaly count " + std::to_string(ds.anomaly_count()) +
                            " does not match manifest " + std::to_string(e.anomalies));
        return ds;
    }
    throw DataError("dataset '" + name + "' not in manifest " + manifest_path);
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot write dataset " + path);
    for (std::size_t c = 0; c < dataset.dims(); ++c) std::fprintf(f, "f%zu,", c);
    std::fprintf(f, "label\n");
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
        for (std::size_t c = 0; c < dataset.dims(); ++c)
            std::fprintf(f, "%.12g,", dataset.features(r, c));
        std::fprintf(f, "%d\n", dataset.labels[r]);
    }
    std::fclose(f);
}

} // namespace advae
