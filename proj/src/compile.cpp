#include "nnquad/compile.hpp"

#include <cmath>
#include <limits>

namespace nnquad {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Layer<double> layer(MatrixXd w, VectorXd b) { return {std::move(w), std::move(b)}; }

MatrixXd col(std::initializer_list<double> v) {
    MatrixXd m(v.size(), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

MatrixXd row(std::initializer_list<double> v) { return col(v).transpose(); }

VectorXd vec(std::initializer_list<double> v) { return col(v).col(0); }

void check_delta(double delta) {
    if (!(delta > 0 && delta < 0.5)) throw InputError("delta must lie in (0, 1/2)");
}

// x in R^d -> gamma(x_i), i.e. x_i or 1 - x_i.
Net literal_map(const Literal& l, int d) {
    MatrixXd w = MatrixXd::Zero(1, d);
    w(0, l.var - 1) = l.negated ? -1.0 : 1.0;
    return affine_network<double>(w, vec({l.negated ? 1.0 : 0.0}));
}

// Constant map R^d -> {value} as a network of the given depth.
Net constant_network(int d, int depth, double value, Activation act) {
    std::vector<Layer<double>> layers;
    layers.push_back(layer(MatrixXd::Zero(1, d), VectorXd::Zero(1)));
    for (int i = 1; i < depth; ++i) layers.push_back(layer(MatrixXd::Zero(1, 1), VectorXd::Zero(1)));
    layers.back().bias(0) = value;
    Alphabet<double> a{0.0, value};
    return Net(act, std::move(layers), std::move(a));
}

Net shift_output(const Net& net, double c) {
    return affine_wrap(net, AffineMap<double>{VectorXd::Ones(1), VectorXd::Constant(1, c)}, Side::output);
}

void check_scalar_gadget(const Net& r) {
    if (r.input_dim() != 1 || r.output_dim() != 1) throw InputError("gadget r must map R to R");
}

}  // namespace

Net build_r_relu(double delta) {
    check_delta(delta);
    const double tau = 0.5 - delta;
    const double s = 1.0 / (2 * tau);
    std::vector<Layer<double>> layers{layer(col({2, 2}), vec({-1, -(1 + 2 * tau)})), layer(row({s, -s}), vec({0}))};
    return Net(Activation::relu, std::move(layers), Alphabet<double>{-s, -1, 0, -(1 + 2 * tau), 2, s});
}

Net build_r_bounded(int n_steps) {
    if (n_steps < 1) throw InputError("build_r_bounded: n_steps must be >= 1");
    const Alphabet<double> small{-2, -1, 0, 1, 2};
    Net psi(Activation::relu, {layer(col({2, 2}), vec({-1, -2})), layer(row({1, -1}), vec({0}))}, small);
    const Net doubling(Activation::relu, {layer(col({2, 2}), vec({0, -1})), layer(row({1, -1}), vec({0}))}, small);
    for (int i = 1; i < n_steps; ++i) psi = compose(doubling, psi);
    psi.set_alphabet(small);
    return psi;
}

int bounded_steps_for(double delta) {
    check_delta(delta);
    return std::max(1, static_cast<int>(std::ceil(-std::log2(0.5 - delta) - 1e-12)));
}

TanhGadget build_r_tanh(double tau) {
    if (!(tau > 0 && tau < 0.25)) throw InputError("tau must lie in (0, 1/4)");
    const double t2 = tau * tau;
    const double b = (-1 - 2 * tau) / (2 * t2);
    Net net(Activation::tanh, {layer(col({1 / t2}), vec({b})), layer(row({0.5}), vec({0.5}))},
            Alphabet<double>{b, 0.5, 1 / t2});
    const double kappa = std::exp(-2 / tau);
    return {std::move(net), tau, kappa, 1 - kappa, 0.5 - 2 * tau};
}

double feasible_tanh_tau(const Formula& f, int d) {
    const double m = std::max<double>({static_cast<double>(f.num_clauses()), static_cast<double>(f.max_clause_size()), 1.0});
    double tau = std::min(0.2, 2 / std::log(2 * m));
    for (int i = 0; i < 60; ++i, tau /= 2) {
        const double kappa = std::exp(-2 / tau), delta = 0.5 - 2 * tau;
        if (kappa < std::pow(delta, d) * (1 - kappa)) return tau;
    }
    throw InputError("no feasible tau found");
}

Net compile_clause(const Clause& c, const Net& r, double rho, int d) {
    check_scalar_gadget(r);
    for (const auto& l : c.literals())
        if (l.var > d) throw InputError("clause reads x" + std::to_string(l.var) + " but d = " + std::to_string(d));
    std::optional<Net> sum;
    for (const auto& l : c.literals()) {
        Net lit = compose(r, literal_map(l, d));
        sum = sum ? add(*sum, lit) : std::move(lit);
    }
    return shift_output(compose(r, *sum), -rho);
}

Net compile_cnf(const Formula& f, const Net& r, double rho, int d) {
    check_scalar_gadget(r);
    if (f.num_vars() > d) throw InputError("compile_cnf: n = " + std::to_string(f.num_vars()) + " exceeds d = " + std::to_string(d));
    std::optional<Net> sum;
    for (const auto& c : f.clauses()) {
        Net cn = compile_clause(c, r, rho, d);
        sum = sum ? add(*sum, cn) : std::move(cn);
    }
    if (!sum) sum = constant_network(d, 2 * r.depth() - 1, 0.0, r.activation());
    return compose(r, shift_output(*sum, rho));
}

Net compile_cnf_two_layer(const Formula& f, double delta, int d) {
    if (f.num_vars() > d) throw InputError("compile_cnf_two_layer: n exceeds d");
    if (f.max_clause_size() > 12) throw InputError("compile_cnf_two_layer: clause size above 12 (2^k neurons per clause)");
    std::vector<VectorXd> rows;
    std::vector<double> biases;
    for (const auto& c : f.clauses()) {
        const auto vars = c.variables();
        const int k = static_cast<int>(vars.size());
        for (std::uint32_t z = 0; z < (1u << k); ++z) {
            std::vector<bool> x(f.num_vars(), false);
            for (int j = 0; j < k; ++j) x[vars[j] - 1] = z >> j & 1u;
            if (!c.eval(x)) continue;
            VectorXd w = VectorXd::Zero(d);
            double b = -(k - 2) / 4.0;
            for (int j = 0; j < k; ++j) {
                const double zj = (z >> j & 1u) ? 0.5 : -0.5;
                w(vars[j] - 1) = zj;
                b -= zj * 0.5;
            }
            rows.push_back(std::move(w));
            biases.push_back(b);
        }
    }
    if (rows.empty()) {  // no clauses: constant sum
        rows.push_back(VectorXd::Zero(d));
        biases.push_back(0);
    }
    MatrixXd W(rows.size(), d);
    VectorXd b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        W.row(i) = rows[i].transpose();
        b(i) = biases[i];
    }
    // sum_C 2 sum sigma(...) + 1 - #clauses, then the outer ramp.
    const double c0 = 1.0 - static_cast<double>(f.num_clauses());
    Alphabet<double> a;
    a.insert_all(W);
    a.insert_all(b);
    a.insert(2);
    a.insert(c0);
    a.insert(0);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Net g(Activation::relu,
          {layer(std::move(W), std::move(b)), layer(MatrixXd::Constant(1, m, f.num_clauses() ? 2.0 : 0.0), vec({c0}))},
          std::move(a));
    return compose(build_r_relu(delta), g);
}

Net build_hat(double delta) {
    check_delta(delta);
    const double s = 1 / delta;
    return Net(Activation::relu, {layer(col({-1, 1}), vec({delta, -(1 - delta)})), layer(row({-s, -s}), vec({1}))},
               Alphabet<double>{-1, 1, delta, -(1 - delta), -s});
}

Net build_curve(int d, double delta) {
    if (d < 1) throw InputError("build_curve: d must be >= 1");
    const Net hat = build_hat(delta);
    const Net dup = affine_network<double>(col({1, 1}), vec({0, 0}));
    Net phi = identity_network<double>(1, 2);
    for (int i = 1; i < d; ++i) {
        const Net inner = compose(phi, hat);
        phi = compose(parallelize<double>({inner, identity_network<double>(1, inner.depth())}), dup);
    }
    return phi;
}

std::vector<CurveVisit> scan_curve(const Net& curve, double delta, double step) {
    const int d = curve.output_dim();
    if (curve.input_dim() != 1) throw InputError("scan_curve needs a curve with one input");
    if (!(step > 0) || step > 1) throw InputError("scan_curve: step must lie in (0, 1]");
    if (d > 20) throw InputError("scan_curve: too many corners");
    const auto count = static_cast<Eigen::Index>(std::floor(1 / step)) + 1;
    Eigen::MatrixXd t(1, count);
    for (Eigen::Index i = 0; i < count; ++i) t(0, i) = std::min(1.0, static_cast<double>(i) * step);
    const Eigen::MatrixXd y = evaluate(curve, t);
    std::vector<CurveVisit> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
        CurveVisit v;
        Eigen::VectorXd z(d);
        for (int j = 0; j < d; ++j) {
            v.corner.push_back(static_cast<int>((bits >> j) & 1));
            z(j) = v.corner.back();
        }
        Eigen::Index run = 0, best = 0, best_end = -1;
        for (Eigen::Index i = 0; i < count; ++i) {
            run = (y.col(i) - z).cwiseAbs().maxCoeff() <= delta ? run + 1 : 0;
            if (run > best) {
                best = run;
                best_end = i;
            }
        }
        v.samples = static_cast<int>(best);
        if (best > 0) {
            v.t_begin = t(0, best_end - best + 1);
            v.t_end = t(0, best_end);
        }
        out.push_back(std::move(v));
    }
    return out;
}

Net compile_high_precision(const Formula& f, int d, double delta) {
    const int n = f.num_vars();
    if (d < 1 || n <= d) throw InputError("compile_high_precision needs 1 <= d < n");
    const Net theta = compile_cnf(f, build_r_relu(delta), 1.0, n);
    const Net curve = build_curve(n - d + 1, delta);
    std::vector<Net> parts;
    if (d > 1) parts.push_back(identity_network<double>(d - 1, curve.depth()));
    parts.push_back(curve);
    return compose(theta, parallelize(parts));
}

AffineMap<double> ball_map(int n, int d, double p) {
    if (n < 1 || n > d) throw InputError("ball_map needs 1 <= n <= d");
    if (!(p >= 1)) throw InputError("ball_map needs p >= 1");
    const double root = std::pow(static_cast<double>(n), 1 / p);
    VectorXd scale = VectorXd::Ones(d), shift = VectorXd::Constant(d, -0.5);
    scale.head(n).setConstant(2 / root);
    shift.head(n).setConstant(-1 / root);
    return {scale, shift};
}

Net compile_ball(const Formula& f, int d, double p, double delta) {
    const Net F = compile_cnf(f, build_r_relu(delta), 1.0, d);
    return affine_wrap(F, ball_map(f.num_vars(), d, p).inverse(), Side::input);
}

Eigen::VectorXd project_to_cube(const Eigen::VectorXd& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

double pde_box_side(int d) { return 1 / (1 + 4 * std::sqrt(static_cast<double>(d))); }

Net compile_pde_source(const Formula& f, int d, double delta) {
    const Net F = f.num_vars() <= d ? compile_cnf(f, build_r_relu(delta), 1.0, d) : compile_high_precision(f, d, delta);
    const double q = pde_box_side(d);
    return affine_wrap(F, AffineMap<double>{VectorXd::Constant(d, 1 / q), VectorXd::Constant(d, -(1 - q) / (2 * q))},
                       Side::input);
}

CnfAudit audit_cnf_network(const Net& net, const Formula& f, int k, double ck) {
    CnfAudit a;
    const int n = f.num_vars();
    const auto m = static_cast<int>(f.num_clauses());
    if (m > ck * n)
        a.warnings.push_back(std::to_string(m) + " clauses exceed ck*n = " + std::to_string(ck * n));
    if (f.max_clause_size() > k)
        a.warnings.push_back("clause of size " + std::to_string(f.max_clause_size()) + " exceeds k = " + std::to_string(k));
    const int kk = std::max(k, f.max_clause_size());
    const double cls = std::max<double>(ck * n, m);

    a.depth = net.depth();
    a.expected_depth = 4;
    a.width = net.width();
    a.width_bound = static_cast<int>(std::floor(cls * 2 * kk));
    a.nonzeros = count_nonzeros(net);
    a.nonzero_bound = static_cast<int>(std::floor(4 * kk * cls));
    auto fail = [&](std::string s) { a.violations.push_back(std::move(s)); };
    if (a.depth != a.expected_depth) fail("depth " + std::to_string(a.depth) + " != 4");
    if (a.width > a.width_bound) fail("width " + std::to_string(a.width) + " above bound " + std::to_string(a.width_bound));
    for (std::size_t i = 0; i < a.nonzeros.size(); ++i)
        if (a.nonzeros[i] > a.nonzero_bound)
            fail("matrix " + std::to_string(i + 1) + " has " + std::to_string(a.nonzeros[i]) + " nonzeros");
    if (!net.alphabet()) fail("no weight alphabet recorded");
    if (net.activation() != Activation::relu) fail("activation is not relu");
    if (!a.violations.empty() || m == 0) return a;

    // Rows of W1: two per literal, one input each.  W2: a 2 x 2|C| block per clause.
    const auto& L = net.layers();
    int lits = 0;
    for (const auto& c : f.clauses()) lits += static_cast<int>(c.size());
    if (L[0].weights.rows() != 2 * lits) fail("W1 has " + std::to_string(L[0].weights.rows()) + " rows, expected 2 per literal");
    if (L[1].weights.rows() != 2 * m) fail("W2 has " + std::to_string(L[1].weights.rows()) + " rows, expected 2 per clause");
    if (L[2].weights.rows() != 2 || L[2].weights.cols() != 2 * m) fail("W3 is not 2 x 2#clauses");
    if (L[3].weights.rows() != 1 || L[3].weights.cols() != 2) fail("W4 is not 1 x 2");
    if (!a.violations.empty()) return a;
    int r0 = 0;
    for (int j = 0; j < m; ++j) {
        const auto& lv = f.clauses()[j].literals();
        for (std::size_t t = 0; t < lv.size(); ++t)
            for (int s = 0; s < 2; ++s) {
                const auto rw = L[0].weights.row(r0 + 2 * static_cast<int>(t) + s);
                if ((rw.array() != 0).count() != 1 || rw(lv[t].var - 1) == 0)
                    fail("W1 row " + std::to_string(r0 + 2 * t + s) + " does not read exactly x" + std::to_string(lv[t].var));
            }
        const int w = 2 * static_cast<int>(lv.size());
        for (int s = 0; s < 2; ++s) {
            const auto rw = L[1].weights.row(2 * j + s);
            const auto inside = (rw.segment(r0, w).array() != 0).count();
            if ((rw.array() != 0).count() != inside) fail("W2 row " + std::to_string(2 * j + s) + " leaves its clause block");
        }
        r0 += w;
    }
    return a;
}

}  // namespace nnquad
