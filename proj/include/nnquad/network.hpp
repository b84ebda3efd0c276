#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nnquad/error.hpp"

namespace nnquad {

enum class Activation { relu, tanh };

inline const char* to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct Layer {
    MatrixX<Scalar> weights;
    VectorX<Scalar> bias;
};

// Sorted set of exact admissible weight values.
template <class Scalar>
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::initializer_list<Scalar> v) : values_(v) { normalize(); }
    explicit Alphabet(std::vector<Scalar> v) : values_(std::move(v)) { normalize(); }

    bool contains(Scalar x) const { return std::binary_search(values_.begin(), values_.end(), x); }
    const std::vector<Scalar>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    void insert(Scalar x) {
        auto it = std::lower_bound(values_.begin(), values_.end(), x);
        if (it == values_.end() || *it != x) values_.insert(it, x);
    }
    void merge(const Alphabet& o) {
        for (Scalar x : o.values_) insert(x);
    }
    template <class Derived>
    void insert_all(const Eigen::DenseBase<Derived>& m) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) insert(m(i, j));
    }

private:
    void normalize() {
        std::sort(values_.begin(), values_.end());
        values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    }
    std::vector<Scalar> values_;
};

// Feed-forward network W_L s(... s(W_1 x + b_1) ...) + b_L; the activation
// is applied after every layer except the last.
template <class Scalar>
class Network {
public:
    using scalar_type = Scalar;
    using Matrix = MatrixX<Scalar>;
    using Vector = VectorX<Scalar>;

    Network(Activation act, std::vector<Layer<Scalar>> layers,
            std::optional<Alphabet<Scalar>> alphabet = std::nullopt)
        : act_(act), layers_(std::move(layers)), alphabet_(std::move(alphabet)) {
        validate();
    }

    Activation activation() const { return act_; }
    const std::vector<Layer<Scalar>>& layers() const { return layers_; }
    const Layer<Scalar>& layer(std::size_t i) const { return layers_.at(i); }
    const std::optional<Alphabet<Scalar>>& alphabet() const { return alphabet_; }

    int input_dim() const { return static_cast<int>(layers_.front().weights.cols()); }
    int output_dim() const { return static_cast<int>(layers_.back().weights.rows()); }
    int depth() const { return static_cast<int>(layers_.size()); }

    // Largest of the input, hidden and output dimensions.
    int width() const {
        Eigen::Index w = layers_.front().weights.cols();
        for (const auto& l : layers_) w = std::max(w, l.weights.rows());
        return static_cast<int>(w);
    }

    void set_alphabet(std::optional<Alphabet<Scalar>> a) {
        alphabet_ = std::move(a);
        check_alphabet();
    }

private:
    void validate() const {
        if (layers_.empty()) throw InputError("network needs at least one layer");
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            const auto& l = layers_[i];
            if (l.weights.rows() < 1 || l.weights.cols() < 1)
                throw InputError("layer " + std::to_string(i) + " has an empty weight matrix");
            if (l.bias.size() != l.weights.rows())
                throw InputError("layer " + std::to_string(i) + ": bias length " + std::to_string(l.bias.size()) +
                                 " != rows " + std::to_string(l.weights.rows()));
            if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows())
                throw InputError("layer " + std::to_string(i) + ": " + std::to_string(l.weights.cols()) +
                                 " columns but previous layer has " + std::to_string(layers_[i - 1].weights.rows()) +
                                 " outputs");
        }
        check_alphabet();
    }

    void check_alphabet() const {
        if (!alphabet_) return;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            const auto& l = layers_[i];
            for (Eigen::Index c = 0; c < l.weights.cols(); ++c)
                for (Eigen::Index r = 0; r < l.weights.rows(); ++r)
                    if (!alphabet_->contains(l.weights(r, c)))
                        throw InputError("layer " + std::to_string(i) + " weight outside alphabet");
            for (Eigen::Index r = 0; r < l.bias.size(); ++r)
                if (!alphabet_->contains(l.bias(r)))
                    throw InputError("layer " + std::to_string(i) + " bias outside alphabet");
        }
    }

    Activation act_;
    std::vector<Layer<Scalar>> layers_;
    std::optional<Alphabet<Scalar>> alphabet_;
};

template <class Derived>
void apply_activation(Activation act, Eigen::MatrixBase<Derived>& h) {
    using S = typename Derived::Scalar;
    if (act == Activation::relu)
        h = h.cwiseMax(S(0));
    else
        h = h.array().tanh().matrix();
}

// Evaluate at every column of X; returns output_dim x X.cols().
template <class Scalar, class Derived>
MatrixX<Scalar> evaluate(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& X) {
    if (X.rows() != net.input_dim())
        throw InputError("input has " + std::to_string(X.rows()) + " rows, network expects " +
                         std::to_string(net.input_dim()));
    MatrixX<Scalar> h = X.template cast<Scalar>();
    const auto& L = net.layers();
    for (std::size_t i = 0; i < L.size(); ++i) {
        MatrixX<Scalar> z = L[i].weights * h;
        z.colwise() += L[i].bias;
        if (i + 1 < L.size()) apply_activation(net.activation(), z);
        h = std::move(z);
    }
    return h;
}

// Scalar output at one point.
template <class Scalar, class Derived>
Scalar evaluate1(const Network<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
    if (net.output_dim() != 1) throw InputError("evaluate1 needs a scalar-output network");
    return evaluate(net, x)(0, 0);
}

template <class Scalar>
std::vector<int> count_nonzeros(const Network<Scalar>& net) {
    std::vector<int> out;
    for (const auto& l : net.layers()) out.push_back(static_cast<int>((l.weights.array() != Scalar(0)).count()));
    return out;
}

// Product of Frobenius norms: a Lipschitz constant for 1-Lipschitz activations.
template <class Scalar>
Scalar lipschitz_bound(const Network<Scalar>& net) {
    Scalar p(1);
    for (const auto& l : net.layers()) p *= l.weights.norm();
    return p;
}

// Depth-1 network x -> W x + b.
template <class Scalar>
Network<Scalar> affine_network(MatrixX<Scalar> W, VectorX<Scalar> b, Activation act = Activation::relu) {
    Alphabet<Scalar> a;
    a.insert_all(W);
    a.insert_all(b);
    return Network<Scalar>(act, {Layer<Scalar>{std::move(W), std::move(b)}}, std::move(a));
}

// ReLU identity on R^dim with the given depth; weights in {-1,0,1}, width 2*dim.
template <class Scalar>
Network<Scalar> identity_network(int dim, int depth) {
    if (dim < 1 || depth < 1) throw InputError("identity_network: dim and depth must be positive");
    using M = MatrixX<Scalar>;
    std::vector<Layer<Scalar>> layers;
    if (depth == 1) {
        layers.push_back({M::Identity(dim, dim), VectorX<Scalar>::Zero(dim)});
    } else {
        M first = M::Zero(2 * dim, dim), last = M::Zero(dim, 2 * dim);
        for (int i = 0; i < dim; ++i) {
            first(2 * i, i) = 1;
            first(2 * i + 1, i) = -1;
            last(i, 2 * i) = 1;
            last(i, 2 * i + 1) = -1;
        }
        layers.push_back({first, VectorX<Scalar>::Zero(2 * dim)});
        for (int k = 0; k < depth - 2; ++k) layers.push_back({M::Identity(2 * dim, 2 * dim), VectorX<Scalar>::Zero(2 * dim)});
        layers.push_back({last, VectorX<Scalar>::Zero(dim)});
    }
    return Network<Scalar>(Activation::relu, std::move(layers), Alphabet<Scalar>{-1, 0, 1});
}

namespace detail {

template <class Scalar>
std::optional<Alphabet<Scalar>> merged(const std::vector<const Network<Scalar>*>& nets) {
    Alphabet<Scalar> a;
    for (auto* n : nets) {
        if (!n->alphabet()) return std::nullopt;
        a.merge(*n->alphabet());
    }
    return a;
}

template <class Scalar>
void record(std::optional<Alphabet<Scalar>>& a, const Layer<Scalar>& l) {
    if (!a) return;
    a->insert_all(l.weights);
    a->insert_all(l.bias);
}

template <class Scalar>
Activation joint_activation(const std::vector<const Network<Scalar>*>& nets, const char* op) {
    std::optional<Activation> act;
    for (auto* n : nets) {
        if (n->depth() == 1) continue;  // affine maps carry no activation
        if (act && *act != n->activation())
            throw InputError(std::string(op) + ": cannot mix relu and tanh networks");
        act = n->activation();
    }
    return act.value_or(nets.front()->activation());
}

template <class Scalar>
MatrixX<Scalar> block_diag(const std::vector<const MatrixX<Scalar>*>& blocks) {
    Eigen::Index r = 0, c = 0;
    for (auto* b : blocks) r += b->rows(), c += b->cols();
    MatrixX<Scalar> out = MatrixX<Scalar>::Zero(r, c);
    r = c = 0;
    for (auto* b : blocks) {
        out.block(r, c, b->rows(), b->cols()) = *b;
        r += b->rows();
        c += b->cols();
    }
    return out;
}

template <class Scalar>
VectorX<Scalar> concat(const std::vector<const VectorX<Scalar>*>& parts) {
    Eigen::Index n = 0;
    for (auto* p : parts) n += p->size();
    VectorX<Scalar> out(n);
    n = 0;
    for (auto* p : parts) {
        out.segment(n, p->size()) = *p;
        n += p->size();
    }
    return out;
}

}  // namespace detail

// R(x) = outer(inner(x)); depth L_outer + L_inner - 1, the inner output map is
// fused into the outer first layer.
template <class Scalar>
Network<Scalar> compose(const Network<Scalar>& outer, const Network<Scalar>& inner) {
    if (outer.input_dim() != inner.output_dim())
        throw InputError("compose: outer expects " + std::to_string(outer.input_dim()) + " inputs, inner produces " +
                         std::to_string(inner.output_dim()));
    const Activation act = detail::joint_activation<Scalar>({&outer, &inner}, "compose");
    const auto& li = inner.layers();
    const auto& lo = outer.layers();
    std::vector<Layer<Scalar>> layers(li.begin(), li.end() - 1);
    Layer<Scalar> junction{lo.front().weights * li.back().weights,
                           lo.front().weights * li.back().bias + lo.front().bias};
    auto alpha = detail::merged<Scalar>({&outer, &inner});
    detail::record(alpha, junction);
    layers.push_back(std::move(junction));
    layers.insert(layers.end(), lo.begin() + 1, lo.end());
    return Network<Scalar>(act, std::move(layers), std::move(alpha));
}

// Extend a ReLU network to a larger depth without changing its realization.
template <class Scalar>
Network<Scalar> pad_depth(const Network<Scalar>& net, int depth) {
    if (depth < net.depth()) throw InputError("pad_depth: target depth below current depth");
    if (depth == net.depth()) return net;
    if (net.activation() != Activation::relu && net.depth() > 1)
        throw UnsupportedError("depth padding needs the ReLU identity; not available for tanh networks");
    return compose(identity_network<Scalar>(net.output_dim(), depth - net.depth() + 1), net);
}

// Realization R_a + R_b; width is the sum of widths.
template <class Scalar>
Network<Scalar> add(const Network<Scalar>& a_in, const Network<Scalar>& b_in) {
    if (a_in.input_dim() != b_in.input_dim() || a_in.output_dim() != b_in.output_dim())
        throw InputError("add: networks have different input or output dimensions");
    const Activation act = detail::joint_activation<Scalar>({&a_in, &b_in}, "add");
    const int L = std::max(a_in.depth(), b_in.depth());
    if (a_in.depth() != b_in.depth() && act == Activation::tanh)
        throw UnsupportedError("add: depth mismatch between tanh networks");
    const Network<Scalar> a = pad_depth(a_in, L), b = pad_depth(b_in, L);
    const auto &la = a.layers(), &lb = b.layers();
    std::vector<Layer<Scalar>> layers;
    auto alpha = detail::merged<Scalar>({&a, &b});
    if (alpha) alpha->insert(Scalar(0));
    if (L == 1) {
        layers.push_back({la[0].weights + lb[0].weights, la[0].bias + lb[0].bias});
        detail::record(alpha, layers.back());
    } else {
        MatrixX<Scalar> first(la[0].weights.rows() + lb[0].weights.rows(), la[0].weights.cols());
        first << la[0].weights, lb[0].weights;
        layers.push_back({first, detail::concat<Scalar>({&la[0].bias, &lb[0].bias})});
        for (int i = 1; i < L - 1; ++i)
            layers.push_back({detail::block_diag<Scalar>({&la[i].weights, &lb[i].weights}),
                              detail::concat<Scalar>({&la[i].bias, &lb[i].bias})});
        MatrixX<Scalar> last(la[L - 1].weights.rows(), la[L - 1].weights.cols() + lb[L - 1].weights.cols());
        last << la[L - 1].weights, lb[L - 1].weights;
        layers.push_back({last, la[L - 1].bias + lb[L - 1].bias});
        detail::record(alpha, layers.back());
    }
    return Network<Scalar>(act, std::move(layers), std::move(alpha));
}

// Block-diagonal stacking: R(x_1, ..., x_k) = (R_1(x_1), ..., R_k(x_k)).
template <class Scalar>
Network<Scalar> parallelize(const std::vector<Network<Scalar>>& nets_in) {
    if (nets_in.empty()) throw InputError("parallelize: no networks");
    std::vector<const Network<Scalar>*> ptrs;
    int L = 0;
    for (const auto& n : nets_in) {
        ptrs.push_back(&n);
        L = std::max(L, n.depth());
    }
    const Activation act = detail::joint_activation<Scalar>(ptrs, "parallelize");
    std::vector<Network<Scalar>> nets;
    for (const auto& n : nets_in) {
        if (n.depth() != L && act == Activation::tanh)
            throw UnsupportedError("parallelize: depth mismatch between tanh networks");
        nets.push_back(pad_depth(n, L));
    }
    ptrs.clear();
    for (const auto& n : nets) ptrs.push_back(&n);
    auto alpha = detail::merged<Scalar>(ptrs);
    if (alpha) alpha->insert(Scalar(0));
    std::vector<Layer<Scalar>> layers;
    for (int i = 0; i < L; ++i) {
        std::vector<const MatrixX<Scalar>*> w;
        std::vector<const VectorX<Scalar>*> b;
        for (const auto& n : nets) {
            w.push_back(&n.layers()[i].weights);
            b.push_back(&n.layers()[i].bias);
        }
        layers.push_back({detail::block_diag<Scalar>(w), detail::concat<Scalar>(b)});
    }
    return Network<Scalar>(act, std::move(layers), std::move(alpha));
}

// Coordinatewise affine map y = scale .* x + shift.
template <class Scalar>
struct AffineMap {
    VectorX<Scalar> scale;
    VectorX<Scalar> shift;

    AffineMap inverse() const {
        if ((scale.array() == Scalar(0)).any()) throw InputError("AffineMap::inverse: zero scale");
        return {scale.cwiseInverse(), -shift.cwiseQuotient(scale)};
    }
    template <class Derived>
    VectorX<Scalar> operator()(const Eigen::MatrixBase<Derived>& x) const {
        return scale.cwiseProduct(x) + shift;
    }
};

enum class Side { input, output };

// Input side: R_new(x) = R(map(x)).  Output side: R_new(x) = map(R(x)).
// The map is folded into the first or last layer; depth is unchanged.
template <class Scalar>
Network<Scalar> affine_wrap(const Network<Scalar>& net, const AffineMap<Scalar>& map, Side side = Side::input) {
    if (map.scale.size() != map.shift.size()) throw InputError("affine_wrap: scale and shift lengths differ");
    std::vector<Layer<Scalar>> layers = net.layers();
    auto alpha = net.alphabet();
    if (side == Side::input) {
        if (map.scale.size() != net.input_dim()) throw InputError("affine_wrap: map dimension != input dimension");
        auto& l = layers.front();
        l.bias = l.weights * map.shift + l.bias;
        l.weights = l.weights * map.scale.asDiagonal();
        detail::record(alpha, l);
    } else {
        if (map.scale.size() != net.output_dim()) throw InputError("affine_wrap: map dimension != output dimension");
        auto& l = layers.back();
        l.weights = map.scale.asDiagonal() * l.weights;
        l.bias = map.scale.cwiseProduct(l.bias) + map.shift;
        detail::record(alpha, l);
    }
    return Network<Scalar>(net.activation(), std::move(layers), std::move(alpha));
}

}  // namespace nnquad
