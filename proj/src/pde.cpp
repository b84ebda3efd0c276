#include "nnquad/pde.hpp"

#include <cmath>
#include <numbers>

namespace nnquad {

using Eigen::VectorXd;

std::uint64_t GridField::size() const {
    std::uint64_t s = 1;
    for (int k = 0; k < d; ++k) s *= static_cast<std::uint64_t>(m);
    return s;
}

VectorXd GridField::point(std::uint64_t index) const {
    VectorXd x(d);
    for (int k = 0; k < d; ++k) {
        x(k) = static_cast<double>(index % static_cast<std::uint64_t>(m)) * h();
        index /= static_cast<std::uint64_t>(m);
    }
    return x;
}

namespace {

void check_grid(int d, int m) {
    if (d < 2 || d > 3) throw InputError("Poisson solver supports d = 2 or 3");
    if (m < 3) throw InputError("grid needs m >= 3");
    if (std::pow(double(m), d) > 2e8) throw BudgetError("grid too large");
}

}  // namespace

GridField sample_field(const std::function<double(const VectorXd&)>& f, int d, int m) {
    check_grid(d, m);
    GridField g{d, m, {}};
    g.values.resize(static_cast<Eigen::Index>(g.size()));
    for (std::uint64_t i = 0; i < g.size(); ++i) g.values(static_cast<Eigen::Index>(i)) = f(g.point(i));
    return g;
}

GridField sample_network(const Net& net, int m) {
    const int d = net.input_dim();
    check_grid(d, m);
    GridField g{d, m, {}};
    const auto N = g.size();
    g.values.resize(static_cast<Eigen::Index>(N));
    constexpr std::uint64_t chunk = 4096;
    for (std::uint64_t s = 0; s < N; s += chunk) {
        const auto k = std::min(chunk, N - s);
        Eigen::MatrixXd X(d, static_cast<Eigen::Index>(k));
        for (std::uint64_t c = 0; c < k; ++c) X.col(static_cast<Eigen::Index>(c)) = g.point(s + c);
        g.values.segment(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) = evaluate(net, X).row(0).transpose();
    }
    return g;
}

namespace {

// y = A x for the negative Laplacian on interior points; boundary entries of x are zero.
void apply_laplacian(const GridField& g, const VectorXd& x, VectorXd& y) {
    const int m = g.m, d = g.d;
    const double inv_h2 = 1 / (g.h() * g.h());
    y.setZero(x.size());
    const Eigen::Index sx = 1, sy = m, sz = static_cast<Eigen::Index>(m) * m;
    if (d == 2) {
        for (int j = 1; j < m - 1; ++j)
            for (int i = 1; i < m - 1; ++i) {
                const Eigen::Index p = i + j * sy;
                y(p) = inv_h2 * (4 * x(p) - x(p - sx) - x(p + sx) - x(p - sy) - x(p + sy));
            }
    } else {
        for (int k = 1; k < m - 1; ++k)
            for (int j = 1; j < m - 1; ++j)
                for (int i = 1; i < m - 1; ++i) {
                    const Eigen::Index p = i + j * sy + k * sz;
                    y(p) = inv_h2 * (6 * x(p) - x(p - sx) - x(p + sx) - x(p - sy) - x(p + sy) - x(p - sz) - x(p + sz));
                }
    }
}

VectorXd interior_mask(const GridField& g) {
    VectorXd mask = VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    for (std::uint64_t i = 0; i < g.size(); ++i) {
        std::uint64_t r = i;
        bool in = true;
        for (int k = 0; k < g.d; ++k) {
            const auto c = r % static_cast<std::uint64_t>(g.m);
            r /= static_cast<std::uint64_t>(g.m);
            in = in && c > 0 && c + 1 < static_cast<std::uint64_t>(g.m);
        }
        mask(static_cast<Eigen::Index>(i)) = in ? 1.0 : 0.0;
    }
    return mask;
}

}  // namespace

PoissonResult solve_poisson(const GridField& f, const PoissonOptions& opt) {
    check_grid(f.d, f.m);
    if (static_cast<std::uint64_t>(f.values.size()) != f.size()) throw InputError("source field has the wrong size");
    const long long cap = opt.max_iterations > 0 ? opt.max_iterations : 10LL * f.m * f.m;
    const VectorXd mask = interior_mask(f);
    const double diag = 2 * f.d / (f.h() * f.h());
    PoissonResult res{GridField{f.d, f.m, VectorXd::Zero(f.values.size())}, 0, 0};
    VectorXd r = f.values.cwiseProduct(mask);
    const double bnorm = r.norm();
    if (bnorm == 0) return res;  // u = 0 exactly
    VectorXd& x = res.u.values;
    VectorXd z = r / diag, p = z, Ap(r.size());
    double rz = r.dot(z);
    for (long long it = 1; it <= cap; ++it) {
        apply_laplacian(f, p, Ap);
        const double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        res.iterations = it;
        res.rel_residual = r.norm() / bnorm;
        if (res.rel_residual <= opt.rel_tol) return res;
        z = r / diag;
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw ConvergenceError("CG reached " + std::to_string(cap) + " iterations at relative residual " +
                           std::to_string(res.rel_residual));
}

double greens_lower_bound(int d, double dist) {
    if (d < 2) throw InputError("greens_lower_bound needs d >= 2");
    if (d == 2) return std::log(2.0) / (2 * std::numbers::pi);
    if (!(dist > 0)) throw InputError("greens_lower_bound needs dist > 0");
    const double omega = 2 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
    return (std::pow(2.0, d - 2) - 1) * std::pow(dist, 2 - d) / ((d - 2) * omega);
}

MaxBoundReport verify_maximum_bound(const GridField& u, const GridField& f, double lo, double hi) {
    if (u.d != f.d || u.m != f.m) throw InputError("u and f live on different grids");
    if (!(0 < lo && lo < hi && hi < 1)) throw InputError("box must satisfy 0 < lo < hi < 1");
    const double diam = (hi - lo) * std::sqrt(static_cast<double>(f.d));
    const double dist = std::min(lo, 1 - hi);
    if (diam > dist / 2 * (1 + 1e-12)) throw InputError("box diameter exceeds half its distance to the boundary");
    MaxBoundReport rep;
    rep.u_min = std::numeric_limits<double>::infinity();
    const double hd = std::pow(f.h(), f.d);
    for (std::uint64_t i = 0; i < f.size(); ++i) {
        const VectorXd x = f.point(i);
        const auto k = static_cast<Eigen::Index>(i);
        rep.sup_norm = std::max(rep.sup_norm, std::abs(f.values(k)));
        if ((x.array() >= lo).all() && (x.array() <= hi).all()) {
            rep.u_min = std::min(rep.u_min, u.values(k));
            rep.l1_norm += std::abs(f.values(k)) * hd;
        }
    }
    if (!std::isfinite(rep.u_min)) throw InputError("box contains no grid points");
    rep.V = greens_lower_bound(f.d, dist);
    rep.bound = rep.V * rep.l1_norm;
    rep.slack = rep.sup_norm * f.h() * f.h();
    rep.holds = rep.u_min >= rep.bound - rep.slack;
    return rep;
}

}  // namespace nnquad
