#include "nnquad/onelayer.hpp"

#include <cmath>
#include <numbers>

#include "nnquad/special.hpp"

namespace nnquad {

double onelayer_ball(const Eigen::VectorXd& a, double b) {
    const int d = static_cast<int>(a.size());
    if (d < 1) throw InputError("onelayer_ball: empty weight vector");
    const double na = a.norm();
    if (b <= -na) return -b;
    if (b >= na) return 0;
    const double s = b / na;
    const double half = (d + 1) / 2.0;
    const double cap = na / ((d + 1) * beta_fn(0.5, half)) * std::pow(1 - s * s, half);
    const double I = incomplete_beta(s * s, 0.5, half);
    return b < 0 ? cap - b / 2 * (1 + I) : cap - b / 2 * (1 - I);
}

namespace {

double sinc(double x) { return x == 0 ? 1.0 : std::sin(x) / x; }

}  // namespace

double onelayer_cube(const Eigen::VectorXd& a, double b, int T, int p) {
    const int d = static_cast<int>(a.size());
    if (d < 1) throw InputError("onelayer_cube: empty weight vector");
    if (T < 1) throw InputError("onelayer_cube: T must be >= 1");
    const double vol = std::pow(2.0, d);
    const double na = a.norm();
    if (na == 0) return vol * std::max(0.0, -b);
    const double l1 = a.lpNorm<1>();
    if (b >= l1) return 0;             // a.x <= |a|_1 on the cube
    if (b <= -l1) return -b * vol;     // integrand is affine with mean -b
    const Eigen::VectorXd a1 = a / na;
    const double S = 2 * std::sqrt(static_cast<double>(d));
    const double beta = b / na;
    // First term via Borwein: the sinc(S u) factor dominates the others.
    const double first = (na * S - b) * std::numbers::pi / 2;
    const auto& rule = gauss_legendre(p);
    auto g = [&](double u) {
        double prod = 1;
        for (int i = 0; i < d; ++i) prod *= sinc(a1(i) * u);
        double q;
        if (u == 0) {
            q = (S * S - beta * beta) / 4;  // limit of sin*sin/u^2
        } else {
            q = std::sin((S + beta) * u / 2) * std::sin((S - beta) * u / 2) / (u * u);
        }
        return -2 * na * prod * q;
    };
    double second = 0;
    for (int i = 0; i < T; ++i) {
        double part = 0;
        for (int k = 0; k < p; ++k) part += rule.weights[k] * g(i + 0.5 + 0.5 * rule.nodes[k]);
        second += 0.5 * part;
    }
    return vol / std::numbers::pi * (first + second);
}

QuadEstimate onelayer_integrate(const Net& net, const Domain& dom, int T, int p) {
    if (net.depth() != 2 || net.activation() != Activation::relu || net.output_dim() != 1)
        throw InputError("onelayer engine needs a depth-2 ReLU network with scalar output");
    const int d = net.input_dim();
    const auto& W1 = net.layer(0).weights;
    const auto& b1 = net.layer(0).bias;
    const auto& W2 = net.layer(1).weights;
    double total = net.layer(1).bias(0);
    for (Eigen::Index j = 0; j < W1.rows(); ++j) {
        if (W2(0, j) == 0) continue;
        const Eigen::VectorXd a = W1.row(j).transpose();
        const double b = -b1(j);
        double v;
        if (dom.kind == Domain::Kind::pball) {
            if (dom.p != 2) throw InputError("onelayer engine supports the Euclidean ball only");
            v = onelayer_ball(a, b);
        } else if (dom.kind == Domain::Kind::cube) {
            // y in [0,1]^d, y = (x + 1)/2: a.y - b = (a/2).x - (b - sum(a)/2), dy = dx / 2^d.
            v = onelayer_cube(a / 2, b - a.sum() / 2, T, p) / std::pow(2.0, d);
        } else {
            // General box: y = mid + half .* x.
            const Eigen::VectorXd half = (dom.hi - dom.lo) / 2, mid = (dom.hi + dom.lo) / 2;
            v = onelayer_cube(a.cwiseProduct(half), b - a.dot(mid), T, p) / std::pow(2.0, d);
        }
        total += W2(0, j) * v;
    }
    QuadEstimate q;
    q.engine = "onelayer";
    q.dim = d;
    q.value = total;
    q.evaluations = static_cast<std::uint64_t>(W1.rows()) * static_cast<std::uint64_t>(T) * static_cast<std::uint64_t>(p);
    return q;
}

}  // namespace nnquad
