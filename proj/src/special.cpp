#include "nnquad/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

#include "nnquad/error.hpp"

namespace nnquad {

namespace {

GaussRule make_rule(int p) {
    GaussRule r;
    r.nodes.resize(p);
    r.weights.resize(p);
    for (int i = 0; i < (p + 1) / 2; ++i) {
        // Chebyshev-like initial guess for the i-th largest root, then Newton on P_p.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= p; ++k) {
                const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = p * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= p; ++k) {
                const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = p * (x * p1 - p0) / (x * x - 1);
        }
        const double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[p - 1 - i] = x;
        r.nodes[i] = -x;
        r.weights[p - 1 - i] = r.weights[i] = w;
    }
    if (p % 2 == 1) r.nodes[p / 2] = 0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int p) {
    if (p < 1 || p > 64) throw InputError("Gauss-Legendre order must be in [1, 64]");
    static std::array<std::unique_ptr<GaussRule>, 65> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    if (!cache[p]) cache[p] = std::make_unique<GaussRule>(make_rule(p));
    return *cache[p];
}

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300, eps = 1e-16;
    const double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1, d = 1 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1) < eps) return h;
    }
    throw ConvergenceError("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0 && b > 0)) throw InputError("incomplete_beta needs a, b > 0");
    if (!(x >= 0 && x <= 1)) throw InputError("incomplete_beta needs x in [0, 1]");
    if (x == 0 || x == 1) return x;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    // The fraction converges fast for x < (a+1)/(a+b+2); otherwise use I_x(a,b) = 1 - I_{1-x}(b,a).
    if (x < (a + 1) / (a + b + 2)) return front * beta_cf(x, a, b) / a;
    return 1 - front * beta_cf(1 - x, b, a) / b;
}

}  // namespace nnquad
