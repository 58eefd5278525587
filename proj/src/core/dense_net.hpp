#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace advae {

// Trainable matrix with paired gradient storage.
struct Parameter {
    Matrix value;
    Matrix grad;
    std::string name;

    Parameter() = default;
    Parameter(Matrix v, std::string n) : value(std::move(v)), grad(value.rows(), value.cols()), name(std::move(n)) {}

    void zero_grad() { grad.fill(0.0); }
};

enum class Activation { rectifier, sigmoid, identity };

Matrix apply_activation(Activation act, const Matrix& pre);
// dL/d(pre) from dL/d(post), given the post-activation values.
Matrix activation_backward(Activation act, const Matrix& post, const Matrix& upstream);

// Entries ~ U(-b, b), b = sqrt(6 / fan_in).
Matrix kaiming_uniform_init(std::size_t fan_in, std::size_t fan_out, RngStream& rng);

// rows x cols of iid N(0, 1) draws.
Matrix sample_standard_normal(RngStream& rng, std::size_t rows, std::size_t cols);

struct DenseLayer {
    Parameter weight; // in x out
    Parameter bias;   // 1 x out
    Activation activation = Activation::identity;

    std::size_t in_dim() const { return weight.value.rows(); }
    std::size_t out_dim() const { return weight.value.cols(); }
};

// Intermediates of one forward pass. Multiple passes through the same net may
// be alive at once; backward consumes the cache it is given.
struct ForwardCache {
    const void* net_tag = nullptr;
    Matrix input;
    std::vector<Matrix> hidden_out;           // post-activation per hidden layer
    Matrix head_out[2];                       // post-activation per head
    bool valid = false;
};

// MLP with a shared hidden trunk and one or two linear(+activation) output
// heads. Two heads share the last hidden activation (mean / log-variance).
class DenseNet {
public:
    DenseNet() = default;
    // head_dims: one or two entries; head_acts matches.
    DenseNet(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims, Activation hidden_act,
             const std::vector<std::size_t>& head_dims, const std::vector<Activation>& head_acts,
             RngStream& rng, const std::string& name);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t num_heads() const { return heads_.size(); }
    std::size_t head_dim(std::size_t i) const { return heads_[i].out_dim(); }

    // Single-head convenience.
    Matrix forward(const Matrix& input, ForwardCache& cache) const;
    // Two-head forward; for single-head nets second output is empty.
    std::pair<Matrix, Matrix> forward2(const Matrix& input, ForwardCache& cache) const;
    // Forward without keeping intermediates.
    Matrix infer(const Matrix& input) const;
    std::pair<Matrix, Matrix> infer2(const Matrix& input) const;

    // Accumulates parameter grads (unless accumulate_params is false) and
    // returns dL/d(input). upstream entries pair with the heads.
    Matrix backward(const ForwardCache& cache, const std::vector<Matrix>& upstream,
                    bool accumulate_params = true);
    Matrix backward(const ForwardCache& cache, const Matrix& upstream, bool accumulate_params = true);

    std::vector<Parameter*> parameters();
    std::vector<const Parameter*> parameters() const;
    void zero_grad();

    const std::vector<DenseLayer>& hidden_layers() const { return hidden_; }
    const std::vector<DenseLayer>& heads() const { return heads_; }
    std::vector<DenseLayer>& hidden_layers_mut() { return hidden_; }
    std::vector<DenseLayer>& heads_mut() { return heads_; }

private:
    std::size_t input_dim_ = 0;
    std::vector<DenseLayer> hidden_;
    std::vector<DenseLayer> heads_;

    Matrix run_trunk(const Matrix& input, ForwardCache* cache) const;
};

// FNV-1a over the raw bytes of all parameter values; freeze-contract checks.
std::uint64_t weight_hash(const DenseNet& net);

} // namespace advae
