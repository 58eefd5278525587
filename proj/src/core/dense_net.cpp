#include "dense_net.hpp"

#include <cmath>
#include <cstring>

namespace advae {

Matrix apply_activation(Activation act, const Matrix& pre) {
    Matrix out = pre;
    switch (act) {
    case Activation::identity:
        break;
    case Activation::rectifier:
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out.at_flat(i) < 0.0) out.at_flat(i) = 0.0;
        break;
    case Activation::sigmoid:
        for (std::size_t i = 0; i < out.size(); ++i)
            out.at_flat(i) = 1.0 / (1.0 + std::exp(-out.at_flat(i)));
        break;
    }
    return out;
}

Matrix activation_backward(Activation act, const Matrix& post, const Matrix& upstream) {
    require_same_shape(post, upstream, "activation_backward");
    Matrix g = upstream;
    switch (act) {
    case Activation::identity:
        break;
    case Activation::rectifier:
        for (std::size_t i = 0; i < g.size(); ++i)
            if (post.at_flat(i) <= 0.0) g.at_flat(i) = 0.0;
        break;
    case Activation::sigmoid:
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double s = post.at_flat(i);
            g.at_flat(i) *= s * (1.0 - s);
        }
        break;
    }
    return g;
}

Matrix kaiming_uniform_init(std::size_t fan_in, std::size_t fan_out, RngStream& rng) {
    if (fan_in == 0 || fan_out == 0)
        throw InvalidDimensionError("kaiming_uniform_init: zero fan");
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    Matrix m(fan_in, fan_out);
    for (std::size_t i = 0; i < m.size(); ++i) m.at_flat(i) = rng.uniform(-bound, bound);
    return m;
}

Matrix sample_standard_normal(RngStream& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.at_flat(i) = rng.normal();
    return m;
}

static DenseLayer make_layer(std::size_t in, std::size_t out, Activation act, RngStream& rng,
                             const std::string& name) {
    DenseLayer layer;
    layer.weight = Parameter(kaiming_uniform_init(in, out, rng), name + ".w");
    layer.bias = Parameter(Matrix(1, out), name + ".b");
    layer.activation = act;
    return layer;
}

DenseNet::DenseNet(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims, Activation hidden_act,
                   const std::vector<std::size_t>& head_dims, const std::vector<Activation>& head_acts,
                   RngStream& rng, const std::string& name)
    : input_dim_(input_dim) {
    if (input_dim == 0) throw InvalidDimensionError(name + ": zero input dim");
    if (head_dims.empty() || head_dims.size() > 2 || head_dims.size() != head_acts.size())
        throw InvalidDimensionError(name + ": need one or two heads");
    std::size_t in = input_dim;
    for (std::size_t i = 0; i < hidden_dims.size(); ++i) {
        hidden_.push_back(make_layer(in, hidden_dims[i], hidden_act, rng, name + ".h" + std::to_string(i)));
        in = hidden_dims[i];
    }
    for (std::size_t i = 0; i < head_dims.size(); ++i)
        heads_.push_back(make_layer(in, head_dims[i], head_acts[i], rng, name + ".out" + std::to_string(i)));
}

Matrix DenseNet::run_trunk(const Matrix& input, ForwardCache* cache) const {
    if (input.cols() != input_dim_)
        throw InvalidDimensionError("forward: input has " + std::to_string(input.cols()) +
                                    " cols, net expects " + std::to_string(input_dim_));
    Matrix h = input;
    for (const DenseLayer& layer : hidden_) {
        Matrix pre = matmul(h, layer.weight.value);
        add_row_inplace(pre, layer.bias.value);
        h = apply_activation(layer.activation, pre);
        if (cache) cache->hidden_out.push_back(h);
    }
    return h;
}

Matrix DenseNet::forward(const Matrix& input, ForwardCache& cache) const {
    auto [a, b] = forward2(input, cache);
    (void)b;
    return a;
}

std::pair<Matrix, Matrix> DenseNet::forward2(const Matrix& input, ForwardCache& cache) const {
    cache = ForwardCache{};
    cache.net_tag = this;
    cache.input = input;
    Matrix h = run_trunk(input, &cache);
    std::pair<Matrix, Matrix> out;
    for (std::size_t i = 0; i < heads_.size(); ++i) {
        Matrix pre = matmul(h, heads_[i].weight.value);
        add_row_inplace(pre, heads_[i].bias.value);
        cache.head_out[i] = apply_activation(heads_[i].activation, pre);
    }
    cache.valid = true;
    out.first = cache.head_out[0];
    if (heads_.size() == 2) out.second = cache.head_out[1];
    return out;
}

Matrix DenseNet::infer(const Matrix& input) const {
    Matrix h = run_trunk(input, nullptr);
    Matrix pre = matmul(h, heads_[0].weight.value);
    add_row_inplace(pre, heads_[0].bias.value);
    return apply_activation(heads_[0].activation, pre);
}

std::pair<Matrix, Matrix> DenseNet::infer2(const Matrix& input) const {
    Matrix h = run_trunk(input, nullptr);
    std::pair<Matrix, Matrix> out;
    for (std::size_t i = 0; i < heads_.size(); ++i) {
        Matrix pre = matmul(h, heads_[i].weight.value);
        add_row_inplace(pre, heads_[i].bias.value);
        Matrix post = apply_activation(heads_[i].activation, pre);
        if (i == 0) out.first = std::move(post); else out.second = std::move(post);
    }
    return out;
}

Matrix DenseNet::backward(const ForwardCache& cache, const Matrix& upstream, bool accumulate_params) {
    return backward(cache, std::vector<Matrix>{upstream}, accumulate_params);
}

Matrix DenseNet::backward(const ForwardCache& cache, const std::vector<Matrix>& upstream,
                          bool accumulate_params) {
    if (!cache.valid || cache.net_tag != this)
        throw StateError("backward: no matching forward cache");
    if (upstream.size() != heads_.size())
        throw InvalidDimensionError("backward: upstream count != head count");

    const Matrix& trunk_out = cache.hidden_out.empty() ? cache.input : cache.hidden_out.back();

    // Heads: accumulate dL/d(trunk output).
    Matrix dtrunk(trunk_out.rows(), trunk_out.cols());
    for (std::size_t i = 0; i < heads_.size(); ++i) {
        DenseLayer& head = heads_[i];
        Matrix dpre = activation_backward(head.activation, cache.head_out[i], upstream[i]);
        if (accumulate_params) {
            head.weight.grad += matmul_at_b(trunk_out, dpre);
            head.bias.grad += col_sum(dpre);
        }
        dtrunk += matmul_a_bt(dpre, head.weight.value);
    }

    // Trunk, last layer to first.
    Matrix dh = std::move(dtrunk);
    for (std::size_t li = hidden_.size(); li-- > 0;) {
        DenseLayer& layer = hidden_[li];
        const Matrix& layer_in = (li == 0) ? cache.input : cache.hidden_out[li - 1];
        Matrix dpre = activation_backward(layer.activation, cache.hidden_out[li], dh);
        if (accumulate_params) {
            layer.weight.grad += matmul_at_b(layer_in, dpre);
            layer.bias.grad += col_sum(dpre);
        }
        dh = matmul_a_bt(dpre, layer.weight.value);
    }
    return dh;
}

std::vector<Parameter*> DenseNet::parameters() {
    std::vector<Parameter*> out;
    for (DenseLayer& l : hidden_) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    for (DenseLayer& l : heads_) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

std::vector<const Parameter*> DenseNet::parameters() const {
    std::vector<const Parameter*> out;
    for (const DenseLayer& l : hidden_) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    for (const DenseLayer& l : heads_) {
        out.push_back(&l.weight);
        out.push_back(&l.bias);
    }
    return out;
}

void DenseNet::zero_grad() {
    for (Parameter* p : parameters()) p->zero_grad();
}

std::uint64_t weight_hash(const DenseNet& net) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const Parameter* p : net.parameters()) {
        const double* v = p->value.data();
        const unsigned char* bytes = reinterpret_cast<const unsigned char*>(v);
        for (std::size_t i = 0; i < p->value.size() * sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

} // namespace advae
