#include "serialize.hpp"

#include <cstdio>
#include <cstring>

#include "errors.hpp"

namespace advae {

namespace {

constexpr char kMagic[8] = {'A', 'D', 'V', 'A', 'E', 'M', '0', '1'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
    std::FILE* f;
    void bytes(const void* p, std::size_t n) {
        if (std::fwrite(p, 1, n, f) != n) throw DataError("model write failed");
    }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void f64(double v) { bytes(&v, 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void matrix(const Matrix& m) {
        u64(m.rows());
        u64(m.cols());
        bytes(m.data(), m.size() * sizeof(double));
    }
};

struct Reader {
    std::FILE* f;
    void bytes(void* p, std::size_t n) {
        if (std::fread(p, 1, n, f) != n) throw DataError("model file truncated");
    }
    std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
    double f64() { double v; bytes(&v, 8); return v; }
    std::string str() {
        std::string s(u32(), '\0');
        bytes(s.data(), s.size());
        return s;
    }
    Matrix matrix() {
        const std::size_t rows = u64();
        const std::size_t cols = u64();
        if (rows > (1ull << 32) || cols > (1ull << 32)) throw DataError("model file corrupt");
        Matrix m(rows, cols);
        bytes(m.data(), m.size() * sizeof(double));
        return m;
    }
};

void write_layer(Writer& w, const DenseLayer& layer) {
    w.u8(static_cast<std::uint8_t>(layer.activation));
    w.matrix(layer.weight.value);
    w.matrix(layer.bias.value);
}

DenseLayer read_layer(Reader& r, const std::string& name) {
    DenseLayer layer;
    layer.activation = static_cast<Activation>(r.u8());
    layer.weight = Parameter(r.matrix(), name + ".w");
    layer.bias = Parameter(r.matrix(), name + ".b");
    return layer;
}

void write_net(Writer& w, const DenseNet& net) {
    w.u64(net.input_dim());
    w.u64(net.hidden_layers().size());
    for (const DenseLayer& l : net.hidden_layers()) write_layer(w, l);
    w.u64(net.heads().size());
    for (const DenseLayer& l : net.heads()) write_layer(w, l);
}

DenseNet read_net(Reader& r, const std::string& name) {
    const std::size_t input_dim = r.u64();
    const std::size_t n_hidden = r.u64();
    // Build a throwaway then replace layers; the ctor needs dims up front, so
    // reconstruct manually through a 1-wide stub and swap in real layers.
    std::vector<DenseLayer> hidden, heads;
    for (std::size_t i = 0; i < n_hidden; ++i) hidden.push_back(read_layer(r, name + ".h" + std::to_string(i)));
    const std::size_t n_heads = r.u64();
    for (std::size_t i = 0; i < n_heads; ++i) heads.push_back(read_layer(r, name + ".out" + std::to_string(i)));

    RngStream dummy(0);
    std::vector<std::size_t> hdims;
    for (const DenseLayer& l : hidden) hdims.push_back(l.out_dim());
    std::vector<std::size_t> head_dims;
    std::vector<Activation> head_acts;
    for (const DenseLayer& l : heads) {
        head_dims.push_back(l.out_dim());
        head_acts.push_back(l.activation);
    }
    Activation hidden_act = hidden.empty() ? Activation::identity : hidden[0].activation;
    DenseNet net(input_dim, hdims, hidden_act, head_dims, head_acts, dummy, name);
    net.hidden_layers_mut() = std::move(hidden);
    net.heads_mut() = std::move(heads);
    return net;
}

} // namespace

void save_model(const ModelArtifact& artifact, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open model file " + path + " for writing");
    Writer w{f};
    try {
        w.bytes(kMagic, sizeof(kMagic));
        w.u32(kVersion);
        w.u8(static_cast<std::uint8_t>(artifact.model.variant));
        w.u64(artifact.model.data_dim);
        const Hyperparams& hp = artifact.model.hyper;
        w.f64(hp.lambda);
        w.f64(hp.gamma);
        w.f64(hp.margin_mse);
        w.f64(hp.margin_kld);
        w.u64(hp.latent_dim);
        w.u64(hp.mc_samples);
        w.u64(hp.batch_size);
        w.u64(hp.max_iters);
        w.u64(hp.hidden_width);
        w.u64(hp.hidden_depth);
        w.str(artifact.dataset_name);
        w.f64(artifact.split.train_fraction);
        w.u64(artifact.split.seed);
        w.f64(artifact.split.contamination_ratio);
        w.u64(artifact.train_seed);
        w.u64(artifact.score_seed);
        w.u64(artifact.scaler.min.size());
        for (double v : artifact.scaler.min) w.f64(v);
        for (double v : artifact.scaler.max) w.f64(v);
        write_net(w, artifact.model.encoder);
        write_net(w, artifact.model.generator);
        write_net(w, artifact.model.transformer);
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
}

ModelArtifact load_model(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw DataError("cannot open model file " + path);
    Reader r{f};
    ModelArtifact artifact;
    try {
        char magic[8];
        r.bytes(magic, sizeof(magic));
        if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
            throw DataError(path + " is not an adVAE model file");
        if (r.u32() != kVersion) throw DataError(path + ": unsupported model version");
        artifact.model.variant = static_cast<Variant>(r.u8());
        artifact.model.data_dim = r.u64();
        Hyperparams& hp = artifact.model.hyper;
        hp.lambda = r.f64();
        hp.gamma = r.f64();
        hp.margin_mse = r.f64();
        hp.margin_kld = r.f64();
        hp.latent_dim = r.u64();
        hp.mc_samples = r.u64();
        hp.batch_size = r.u64();
        hp.max_iters = r.u64();
        hp.hidden_width = r.u64();
        hp.hidden_depth = r.u64();
        artifact.dataset_name = r.str();
        artifact.split.train_fraction = r.f64();
        artifact.split.seed = r.u64();
        artifact.split.contamination_ratio = r.f64();
        artifact.train_seed = r.u64();
        artifact.score_seed = r.u64();
        const std::size_t d = r.u64();
        artifact.scaler.min.resize(d);
        artifact.scaler.max.resize(d);
        for (double& v : artifact.scaler.min) v = r.f64();
        for (double& v : artifact.scaler.max) v = r.f64();
        artifact.model.encoder = read_net(r, "E");
        artifact.model.generator = read_net(r, "G");
        artifact.model.transformer = read_net(r, "T");
    } catch (...) {
        std::fclose(f);
        throw;
    }
    std::fclose(f);
    return artifact;
}

} // namespace advae
