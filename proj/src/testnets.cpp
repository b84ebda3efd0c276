#include "nnquad/testnets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nnquad/compile.hpp"

namespace nnquad {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Net random_relu_network(int d, int hidden, int width, std::uint64_t seed) {
    if (d < 1 || hidden < 1 || width < 1) throw InputError("random_relu_network: sizes must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    auto make = [&](int rows, int cols) {
        const double sd = std::sqrt(2.0 / cols);
        std::uniform_real_distribution<double> U(-1 / std::sqrt(double(cols)), 1 / std::sqrt(double(cols)));
        Layer<double> l{MatrixXd(rows, cols), VectorXd(rows)};
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) {
                double z;
                do z = N(rng);
                while (std::abs(z) > 2);
                l.weights(i, j) = sd * z;
            }
        for (int i = 0; i < rows; ++i) l.bias(i) = U(rng);
        return l;
    };
    std::vector<Layer<double>> layers;
    layers.push_back(make(width, d));
    for (int i = 1; i < hidden; ++i) layers.push_back(make(width, width));
    layers.push_back(make(1, width));
    return Net(Activation::relu, std::move(layers));
}

namespace {

double ramp(double t, double delta) {
    const double tau = 0.5 - delta;
    return std::clamp((t - 0.5) / tau, 0.0, 1.0);
}

// min(a, b) = sigma(a) - sigma(a - b) for a >= 0; one level pairs neighbours.
Net min_level(int k) {
    const int pairs = k / 2, odd = k % 2;
    MatrixXd W1 = MatrixXd::Zero(2 * pairs + odd, k), W2 = MatrixXd::Zero(pairs + odd, 2 * pairs + odd);
    for (int p = 0; p < pairs; ++p) {
        W1(2 * p, 2 * p) = 1;
        W1(2 * p + 1, 2 * p) = 1;
        W1(2 * p + 1, 2 * p + 1) = -1;
        W2(p, 2 * p) = 1;
        W2(p, 2 * p + 1) = -1;
    }
    if (odd) W1(2 * pairs, k - 1) = 1, W2(pairs, 2 * pairs) = 1;
    return Net(Activation::relu,
               {{W1, VectorXd::Zero(W1.rows())}, {W2, VectorXd::Zero(W2.rows())}});
}

}  // namespace

double CornerIntegrand::operator()(const Eigen::Ref<const VectorXd>& x) const {
    double s = 0;
    for (const auto& z : corners) {
        double m = 1;
        for (std::size_t i = 0; i < z.size(); ++i) m = std::min(m, ramp(std::abs(z[i] - x(i)), delta));
        s += m;
    }
    return s;
}

BatchIntegrand CornerIntegrand::batch() const {
    return [self = *this](const MatrixXd& X) {
        VectorXd y(X.cols());
        for (Eigen::Index c = 0; c < X.cols(); ++c) y(c) = self(X.col(c));
        return y;
    };
}

Net CornerIntegrand::network() const {
    const int d = dim();
    const Net r = build_r_relu(delta);
    std::optional<Net> total;
    for (const auto& z : corners) {
        // |z_i - x_i| is x_i or 1 - x_i on [0,1].
        MatrixXd S = MatrixXd::Zero(d, d);
        VectorXd c = VectorXd::Zero(d);
        for (int i = 0; i < d; ++i) {
            S(i, i) = z[i] ? -1.0 : 1.0;
            c(i) = z[i] ? 1.0 : 0.0;
        }
        Net net = compose(parallelize(std::vector<Net>(d, r)), affine_network<double>(S, c));
        for (int k = d; k > 1; k = (k + 1) / 2) net = compose(min_level(k), net);
        total = total ? add(*total, net) : std::move(net);
    }
    return *total;
}

double CornerIntegrand::exact_integral() const {
    // P(r(U) > t) = 1/2 - tau t per coordinate, so the mean of the min is
    // int_0^1 (1/2 - tau t)^d dt.
    const int d = dim();
    const double tau = 0.5 - delta;
    const double one = (std::pow(0.5, d + 1) - std::pow(0.5 - tau, d + 1)) / (tau * (d + 1));
    return static_cast<double>(corners.size()) * one;
}

CornerIntegrand random_corner_integrand(int d, std::uint64_t seed, double delta) {
    if (d < 1 || d > 20) throw InputError("random_corner_integrand: d must be in [1, 20]");
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> all(std::size_t{1} << d);
    std::iota(all.begin(), all.end(), 0u);
    std::shuffle(all.begin(), all.end(), rng);
    CornerIntegrand f;
    f.delta = delta;
    const std::size_t count = std::max<std::size_t>(1, all.size() / 2);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<int> z(d);
        for (int i = 0; i < d; ++i) z[i] = static_cast<int>(all[k] >> i & 1u);
        f.corners.push_back(std::move(z));
    }
    return f;
}

}  // namespace nnquad
