#include "nnquad/decide.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nnquad/compile.hpp"

namespace nnquad {

Engine parse_engine(const std::string& s) {
    if (s == "grid") return Engine::grid;
    if (s == "mc") return Engine::mc;
    if (s == "qmc") return Engine::qmc;
    if (s == "onelayer") return Engine::onelayer;
    throw InputError("unknown engine '" + s + "' (grid, mc, qmc, onelayer)");
}

const char* to_string(Engine e) {
    switch (e) {
        case Engine::grid: return "grid";
        case Engine::mc: return "mc";
        case Engine::qmc: return "qmc";
        case Engine::onelayer: return "onelayer";
    }
    return "?";
}

Decision decide_from_estimate(const QuadEstimate& q, const GapParams& gap) {
    Decision d;
    d.engine = q.engine;
    d.estimate = q.value;
    d.threshold = gap.threshold();
    d.sat = q.value > d.threshold;
    if (q.rigorous_error) {
        d.error_bound = *q.rigorous_error;
        // Either the bound fits inside the gap, or the enclosure [value - e, value + e]
        // already excludes the threshold; the integral is <= kappa or >= nu rho.
        d.certified = *q.rigorous_error < gap.margin() || std::abs(q.value - d.threshold) > *q.rigorous_error;
    }
    if (q.engine == "mc") {
        const double m = gap.margin();
        d.failure_probability = std::min(1.0, 0.25 / (static_cast<double>(q.evaluations) * m * m));
    }
    return d;
}

int next_resolution(int m) {
    if (m < 8) return 8;
    return (m & (m - 1)) == 0 ? m / 2 * 3 : m / 3 * 4;
}

Decision decide_sat(const Formula& f, const DecideOptions& opt) {
    const int n = f.num_vars();
    const Net net = compile_cnf(f, build_r_relu(opt.delta), 1.0, n);
    const GapParams gap{0.0, 1.0, std::pow(opt.delta, n)};
    switch (opt.engine) {
        case Engine::grid: {
            Decision best;
            bool any = false;
            for (int m = 4; std::pow(double(m), n) <= opt.max_cells; m = next_resolution(m)) {
                GridOptions g;
                g.max_cells = opt.max_cells;
                best = decide_from_estimate(grid_oracle(net, m, g), gap);
                best.resolution = m;
                any = true;
                if (best.certified) break;
            }
            if (!any) throw BudgetError("grid budget too small for n = " + std::to_string(n));
            return best;
        }
        case Engine::mc: {
            Decision d = decide_from_estimate(mc_integrate(net, opt.samples, opt.seed), gap);
            d.resolution = static_cast<int>(std::min<std::uint64_t>(opt.samples, 1u << 30));
            return d;
        }
        case Engine::qmc: {
            Decision d = decide_from_estimate(qmc_integrate(net, opt.samples), gap);
            d.resolution = static_cast<int>(std::min<std::uint64_t>(opt.samples, 1u << 30));
            return d;
        }
        case Engine::onelayer:
            throw InputError("the onelayer engine needs a depth-2 network; compiled formulas have depth 4");
    }
    throw InputError("unknown engine");
}

std::vector<std::size_t> largest_cluster(const std::vector<double>& y, double eps) {
    if (y.empty()) throw InputError("largest_cluster: empty input");
    if (!(eps >= 0)) throw InputError("largest_cluster: eps must be >= 0");
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return y[a] < y[b]; });
    std::size_t best_lo = 0, best_len = 0, hi = 0;
    // Relative slack so 1.1 - 1.0 <= 2 * 0.05 holds in floating point.
    const auto within = [&](double a, double b) { return b - a <= 2 * eps + 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); };
    for (std::size_t lo = 0; lo < order.size(); ++lo) {
        if (hi < lo) hi = lo;
        while (hi + 1 < order.size() && within(y[order[lo]], y[order[hi + 1]])) ++hi;
        if (hi - lo + 1 > best_len) {
            best_len = hi - lo + 1;
            best_lo = lo;
        }
    }
    std::vector<std::size_t> out(order.begin() + best_lo, order.begin() + best_lo + best_len);
    std::sort(out.begin(), out.end());
    return out;
}

double boost(const std::function<double(std::uint64_t)>& estimator, int l, double eps) {
    if (l < 1) throw InputError("boost: need at least one repetition");
    std::vector<double> y(l);
    for (int i = 0; i < l; ++i) y[i] = estimator(static_cast<std::uint64_t>(i));
    std::vector<double> c;
    for (auto i : largest_cluster(y, eps)) c.push_back(y[i]);
    std::sort(c.begin(), c.end());
    return c[(c.size() - 1) / 2];
}

}  // namespace nnquad
