#include "nnquad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "nnquad/sobol.hpp"

namespace nnquad {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr Eigen::Index kChunk = 4096;

double pnorm(const Eigen::Ref<const VectorXd>& x, double p) {
    if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
    return std::pow(x.cwiseAbs().array().pow(p).sum(), 1 / p);
}

// Affine enclosure of a ReLU network over a box: value = c + A u + e with
// u in [-r, r]^d and e in [el, eu]; unstable units use the chord relaxation.
class Enclosure {
public:
    explicit Enclosure(const Net& net) : net_(net) {
        for (const auto& l : net.layers()) {
            wpos_.push_back(l.weights.cwiseMax(0.0));
            wneg_.push_back(l.weights.cwiseMin(0.0));
        }
        const auto L = net.layers().size();
        A_.resize(L);
        c_.resize(L);
        el_.resize(L);
        eu_.resize(L);
    }

    // Output interval [lo, hi] and the width of its error term.
    double run(const Eigen::Ref<const VectorXd>& center, const VectorXd& radius, double& lo, double& hi) {
        const auto& L = net_.layers();
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (i == 0) {
                A_[0] = L[0].weights;
                c_[0].noalias() = L[0].weights * center;
                c_[0] += L[0].bias;
                el_[0].setZero(L[0].bias.size());
                eu_[0].setZero(L[0].bias.size());
            } else {
                A_[i].noalias() = L[i].weights * A_[i - 1];
                c_[i].noalias() = L[i].weights * c_[i - 1];
                c_[i] += L[i].bias;
                el_[i].noalias() = wpos_[i] * el_[i - 1];
                el_[i].noalias() += wneg_[i] * eu_[i - 1];
                eu_[i].noalias() = wpos_[i] * eu_[i - 1];
                eu_[i].noalias() += wneg_[i] * el_[i - 1];
            }
            if (i + 1 == L.size()) break;
            rad_.noalias() = A_[i].cwiseAbs() * radius;
            for (Eigen::Index j = 0; j < c_[i].size(); ++j) {
                const double l = c_[i](j) - rad_(j) + el_[i](j);
                const double h = c_[i](j) + rad_(j) + eu_[i](j);
                if (l >= 0) continue;
                if (h <= 0) {
                    A_[i].row(j).setZero();
                    c_[i](j) = el_[i](j) = eu_[i](j) = 0;
                    continue;
                }
                const double lam = h / (h - l);
                A_[i].row(j) *= lam;
                c_[i](j) *= lam;
                el_[i](j) *= lam;
                eu_[i](j) = lam * eu_[i](j) - lam * l;
            }
        }
        const auto k = L.size() - 1;
        const double r = (A_[k].row(0).cwiseAbs() * radius)(0);
        lo = c_[k](0) - r + el_[k](0);
        hi = c_[k](0) + r + eu_[k](0);
        return eu_[k](0) - el_[k](0);
    }

    // Value at the center of the last box; exact when run() returned 0.
    double center_value() const { return c_.back()(0); }

private:
    const Net& net_;
    std::vector<MatrixXd> wpos_, wneg_, A_;
    std::vector<VectorXd> c_, el_, eu_;
    VectorXd rad_;
};

struct GridGeometry {
    int d, m;
    VectorXd lo, width;  // cell widths per dimension
};

GridGeometry geometry(const Domain& dom, int d, int m) {
    GridGeometry g{d, m, VectorXd::Zero(d), VectorXd::Constant(d, 1.0 / m)};
    if (dom.kind == Domain::Kind::box) {
        if (dom.lo.size() != d || dom.hi.size() != d) throw InputError("box dimension mismatch");
        g.lo = dom.lo;
        g.width = (dom.hi - dom.lo) / m;
    } else if (dom.kind == Domain::Kind::pball) {
        g.lo = VectorXd::Constant(d, -1.0);
        g.width = VectorXd::Constant(d, 2.0 / m);
    }
    return g;
}

// Shared midpoint loop.  cell_error(center, radius, value) returns a bound on
// |cell mean - value| and sup |f| over the cell (for cells cut by a ball boundary).
template <class Eval, class CellBound>
QuadEstimate midpoint_loop(const char* name, Eval&& eval, CellBound&& cell_bound, const Domain& dom, int d, int m,
                           double max_cells) {
    if (m < 1) throw InputError("grid oracle needs m >= 1");
    const double cells = std::pow(static_cast<double>(m), d);
    if (cells > max_cells)
        throw BudgetError("grid of " + std::to_string(m) + "^" + std::to_string(d) + " cells exceeds the budget of " +
                          std::to_string(static_cast<long long>(max_cells)));
    const GridGeometry g = geometry(dom, d, m);
    const VectorXd radius = g.width / 2;
    const bool ball = dom.kind == Domain::Kind::pball;
    const auto total = static_cast<std::uint64_t>(std::llround(cells));

    std::vector<int> idx(d, 0);
    double sum = 0, err = 0;
    MatrixXd X(d, kChunk);
    std::vector<unsigned char> inside(kChunk), cut(kChunk);
    std::uint64_t done = 0;
    while (done < total) {
        const auto n = static_cast<Eigen::Index>(std::min<std::uint64_t>(kChunk, total - done));
        for (Eigen::Index c = 0; c < n; ++c) {
            for (int j = 0; j < d; ++j) X(j, c) = g.lo(j) + (idx[j] + 0.5) * g.width(j);
            if (ball) {
                VectorXd near(d), far(d);
                for (int j = 0; j < d; ++j) {
                    const double a = X(j, c) - radius(j), b = X(j, c) + radius(j);
                    near(j) = (a <= 0 && b >= 0) ? 0.0 : std::min(std::abs(a), std::abs(b));
                    far(j) = std::max(std::abs(a), std::abs(b));
                }
                inside[c] = pnorm(X.col(c), dom.p) <= 1;
                cut[c] = pnorm(near, dom.p) < 1 && pnorm(far, dom.p) > 1;
            }
            for (int j = 0; j < d; ++j) {
                if (++idx[j] < m) break;
                idx[j] = 0;
            }
        }
        const VectorXd y = eval(X.leftCols(n));
        for (Eigen::Index c = 0; c < n; ++c) {
            if (ball && !inside[c] && !cut[c]) continue;
            double sup = 0;
            const double e = cell_bound(X.col(c), radius, y(c), sup);
            if (!ball || inside[c]) sum += y(c);
            err += (ball && cut[c]) ? sup : e;
        }
        done += static_cast<std::uint64_t>(n);
    }
    QuadEstimate q;
    q.engine = name;
    q.dim = d;
    q.evaluations = total;
    // Mean value: divide by the number of cells, or by the ball volume in cell units.
    double denom = cells;
    if (ball) denom = pball_volume(d, dom.p) / g.width.prod();
    q.value = sum / denom;
    q.rigorous_error = err / denom;
    return q;
}

}  // namespace

BatchIntegrand as_integrand(const Net& net) {
    if (net.output_dim() != 1) throw InputError("integrand must have scalar output");
    auto held = std::make_shared<const Net>(net);
    return [held](const MatrixXd& X) -> VectorXd { return evaluate(*held, X).row(0).transpose(); };
}

Domain Domain::make_box(VectorXd lo, VectorXd hi) {
    if (lo.size() != hi.size() || (hi.array() <= lo.array()).any()) throw InputError("box needs lo < hi coordinatewise");
    Domain d;
    d.kind = Kind::box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

Domain Domain::make_pball(double p) {
    if (!(p >= 1)) throw InputError("l_p ball needs p >= 1");
    Domain d;
    d.kind = Kind::pball;
    d.p = p;
    return d;
}

double pball_volume(int d, double p) {
    if (std::isinf(p)) return std::pow(2.0, d);
    return std::exp(d * std::log(2 * std::tgamma(1 + 1 / p)) - std::lgamma(1 + d / p));
}

namespace {

// Midpoint rule on the m^d grid, visiting it as a tree over a coarse base grid:
// a box on which the enclosure is exactly affine contributes its center value
// once per fine cell it contains, which equals the fine midpoint sum.
class HierarchicalGrid {
public:
    HierarchicalGrid(const Net& net, int m, const Domain& dom)
        : net_(net), enc_(net), lip_(lipschitz_bound(net)), d_(net.input_dim()) {
        levels_ = 0;
        base_ = m;
        while (base_ % 2 == 0 && levels_ < 20) base_ /= 2, ++levels_;
        g_ = geometry(dom, d_, base_);
        fine_per_level_.resize(levels_ + 1);
        for (int l = 0; l <= levels_; ++l) fine_per_level_[l] = std::ldexp(1.0, (levels_ - l) * d_);
    }

    void run() {
        std::vector<int> idx(d_, 0);
        const double cells = std::pow(static_cast<double>(base_), d_);
        for (double c = 0; c < cells; ++c) {
            VectorXd center(d_);
            for (int j = 0; j < d_; ++j) center(j) = g_.lo(j) + (idx[j] + 0.5) * g_.width(j);
            visit(center, g_.width / 2, 0);
            for (int j = 0; j < d_; ++j) {
                if (++idx[j] < base_) break;
                idx[j] = 0;
            }
        }
    }

    double sum = 0, err = 0;
    std::uint64_t evaluations = 0;

private:
    void visit(const VectorXd& center, const VectorXd& radius, int level) {
        double lo, hi;
        const double w = enc_.run(center, radius, lo, hi);
        ++evaluations;
        if (w == 0) {
            sum += fine_per_level_[level] * enc_.center_value();
            return;
        }
        if (level == levels_) {
            sum += evaluate1(net_, center);
            err += std::min(w, lip_ * radius.norm());
            return;
        }
        const VectorXd half = radius / 2;
        VectorXd child(d_);
        for (std::uint32_t corner = 0; corner < (1u << d_); ++corner) {
            for (int j = 0; j < d_; ++j) child(j) = center(j) + ((corner >> j & 1u) ? half(j) : -half(j));
            visit(child, half, level + 1);
        }
    }

    const Net& net_;
    Enclosure enc_;
    double lip_;
    int d_, base_ = 1, levels_ = 0;
    GridGeometry g_;
    std::vector<double> fine_per_level_;
};

}  // namespace

QuadEstimate grid_oracle(const Net& net, int m, const GridOptions& opt) {
    const int d = net.input_dim();
    if (net.output_dim() != 1) throw InputError("integrand must have scalar output");
    const bool use_enc = opt.enclosures && net.activation() == Activation::relu;
    if (use_enc && opt.domain.kind != Domain::Kind::pball && d <= 16) {
        if (m < 1) throw InputError("grid oracle needs m >= 1");
        const double cells = std::pow(static_cast<double>(m), d);
        if (cells > opt.max_cells)
            throw BudgetError("grid of " + std::to_string(m) + "^" + std::to_string(d) + " cells exceeds the budget of " +
                              std::to_string(static_cast<long long>(opt.max_cells)));
        HierarchicalGrid h(net, m, opt.domain);
        h.run();
        QuadEstimate q;
        q.engine = "grid";
        q.dim = d;
        q.value = h.sum / cells;
        q.rigorous_error = h.err / cells;
        q.evaluations = h.evaluations;
        return q;
    }
    const auto f = as_integrand(net);
    const double lip = lipschitz_bound(net);
    Enclosure enc(net);
    auto bound = [&](const Eigen::Ref<const VectorXd>& center, const VectorXd& radius, double value, double& sup) {
        const double lip_err = lip * radius.norm();
        sup = std::abs(value) + lip_err;
        if (!use_enc) return lip_err;
        double lo, hi;
        const double w = enc.run(center, radius, lo, hi);
        sup = std::min(sup, std::max(std::abs(lo), std::abs(hi)));
        return std::min(lip_err, w);
    };
    return midpoint_loop("grid", f, bound, opt.domain, d, m, opt.max_cells);
}

QuadEstimate grid_midpoint(const BatchIntegrand& f, int d, int m, const GridOptions& opt,
                           std::optional<double> lipschitz) {
    const double inf = std::numeric_limits<double>::infinity();
    auto bound = [&](const Eigen::Ref<const VectorXd>&, const VectorXd& radius, double value, double& sup) {
        const double e = lipschitz ? *lipschitz * radius.norm() : inf;
        sup = std::abs(value) + e;
        return e;
    };
    QuadEstimate q = midpoint_loop("grid", f, bound, opt.domain, d, m, opt.max_cells);
    if (!lipschitz) q.rigorous_error.reset();
    return q;
}

QuadEstimate mc_integrate(const BatchIntegrand& f, int d, std::uint64_t n, std::uint64_t seed, const Domain& dom) {
    if (n < 2) throw InputError("Monte Carlo needs at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    VectorXd lo = VectorXd::Zero(d), span = VectorXd::Ones(d);
    if (dom.kind == Domain::Kind::box) {
        if (dom.lo.size() != d) throw InputError("box dimension mismatch");
        lo = dom.lo;
        span = dom.hi - dom.lo;
    } else if (dom.kind == Domain::Kind::pball) {
        lo.setConstant(-1);
        span.setConstant(2);
    }
    double sum = 0, sumsq = 0;
    std::uint64_t done = 0;
    MatrixXd X(d, kChunk);
    while (done < n) {
        const auto k = static_cast<Eigen::Index>(std::min<std::uint64_t>(kChunk, n - done));
        for (Eigen::Index c = 0; c < k; ++c) {
            do {
                for (int j = 0; j < d; ++j) X(j, c) = lo(j) + span(j) * U(rng);
            } while (dom.kind == Domain::Kind::pball && pnorm(X.col(c), dom.p) > 1);
        }
        const VectorXd y = f(X.leftCols(k));
        sum += y.sum();
        sumsq += y.squaredNorm();
        done += static_cast<std::uint64_t>(k);
    }
    QuadEstimate q;
    q.engine = "mc";
    q.dim = d;
    q.evaluations = n;
    q.value = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sumsq - sum * q.value) / static_cast<double>(n - 1));
    q.std_error = std::sqrt(var / static_cast<double>(n));
    return q;
}

QuadEstimate mc_integrate(const Net& net, std::uint64_t n, std::uint64_t seed, const Domain& dom) {
    return mc_integrate(as_integrand(net), net.input_dim(), n, seed, dom);
}

QuadEstimate qmc_integrate(const BatchIntegrand& f, int d, std::uint64_t n, const Domain& dom) {
    if (n < 1) throw InputError("QMC needs at least one point");
    if (dom.kind == Domain::Kind::pball) throw InputError("QMC supports cube and box domains only");
    SobolSequence seq(d);
    double sum = 0;
    std::uint64_t done = 0;
    while (done < n) {
        const auto k = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, n - done));
        MatrixXd X = seq.take(k);
        if (dom.kind == Domain::Kind::box) {
            if (dom.lo.size() != d) throw InputError("box dimension mismatch");
            X = ((dom.hi - dom.lo).asDiagonal() * X).colwise() + dom.lo;
        }
        sum += f(X).sum();
        done += k;
    }
    QuadEstimate q;
    q.engine = "qmc";
    q.dim = d;
    q.evaluations = n;
    q.value = sum / static_cast<double>(n);
    return q;
}

QuadEstimate qmc_integrate(const Net& net, std::uint64_t n, const Domain& dom) {
    return qmc_integrate(as_integrand(net), net.input_dim(), n, dom);
}

std::vector<double> qmc_prefix_means(const BatchIntegrand& f, int d, const std::vector<std::uint64_t>& ns) {
    if (ns.empty()) return {};
    if (!std::is_sorted(ns.begin(), ns.end()) || ns.front() < 1)
        throw InputError("qmc_prefix_means needs an ascending list of positive sizes");
    SobolSequence seq(d);
    std::vector<double> out;
    double sum = 0;
    std::uint64_t done = 0;
    for (const std::uint64_t n : ns) {
        while (done < n) {
            const auto k = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, n - done));
            sum += f(seq.take(k)).sum();
            done += k;
        }
        out.push_back(sum / static_cast<double>(n));
    }
    return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor) {
    if (x.size() != y.size()) throw InputError("loglog_slope: size mismatch");
    if (x.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > floor)) return std::nullopt;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    const double den = n * sxx - sx * sx;
    if (den <= 0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

}  // namespace nnquad
