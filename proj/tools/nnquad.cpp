// nnquad command-line harness.
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "nnquad/nnquad.hpp"

namespace {

using namespace nnquad;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    std::uint64_t seed = 0;
    double delta = 0.25;
    int k = 3;
    double ck = 4;
    std::string engine = "grid";
    std::string schedule;
    std::string out;
    std::string variant = "standard";
    int dim = 0;
    double p_norm = 2;
    double tau = 0;

    std::string input;
    std::string profile = "random-relu";
    std::vector<std::string> engines{"qmc", "mc"};
    std::vector<int> depths{3, 6, 9};
    int width = 100;
    int seeds = 1;
    int reference_exp = 22;
    int grid_m = 257;
    std::string domain = "cube";
    std::string reference;
    int exhaustive = 0;
    int max_clauses = 2;
    double s_tilde = 0.5;
};

std::string num(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? sep : "") << v[i];
    return s.str();
}

// Every run is determined by this line plus the bundled data.
std::string config_line(const RunConfig& c) {
    std::ostringstream s;
    s << "# config: subcommand=" << c.subcommand << " seed=" << c.seed << " delta=" << num(c.delta) << " k=" << c.k
      << " ck=" << num(c.ck) << " engine=" << c.engine << " n-schedule=" << c.schedule << " variant=" << c.variant
      << " dim=" << c.dim << " p-norm=" << num(c.p_norm) << " tau=" << num(c.tau);
    if (c.subcommand == "convergence")
        s << " profile=" << c.profile << " engines=" << join(c.engines) << " depths=" << join(c.depths)
          << " width=" << c.width << " seeds=" << c.seeds << " reference-exp=" << c.reference_exp;
    if (c.subcommand == "integrate") s << " domain=" << c.domain;
    if (c.subcommand == "pde-demo") s << " m=" << c.grid_m;
    if (c.subcommand == "matvec") s << " s-tilde=" << num(c.s_tilde);
    if (!c.input.empty()) s << " input=" << c.input;
    return s.str();
}

// "a:b" means 2^a, ..., 2^b; otherwise a comma-separated list.
std::vector<std::uint64_t> parse_schedule(const std::string& text, std::vector<std::uint64_t> fallback) {
    if (text.empty()) return fallback;
    std::vector<std::uint64_t> out;
    try {
        if (const auto colon = text.find(':'); colon != std::string::npos) {
            const int a = std::stoi(text.substr(0, colon));
            const int b = std::stoi(text.substr(colon + 1));
            if (a < 0 || b < a || b > 40) throw UsageError("exponent range");
            for (int e = a; e <= b; ++e) out.push_back(std::uint64_t{1} << e);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const long long v = std::stoll(item);
                if (v < 1) throw UsageError("non-positive size");
                out.push_back(static_cast<std::uint64_t>(v));
            }
        }
    } catch (const std::logic_error&) {
        throw UsageError("bad --n-schedule '" + text + "' (use a:b for 2^a..2^b or a comma list)");
    } catch (const UsageError& e) {
        throw UsageError("bad --n-schedule '" + text + "': " + e.what());
    }
    if (out.empty()) throw UsageError("empty --n-schedule");
    return out;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ParseError(path, "cannot open for writing");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

const char* kCsvHeader = "engine,d,N,seed,estimate,reference,abs_error";

void csv_row(std::ostream& os, const std::string& engine, int d, std::uint64_t n, std::uint64_t seed, double est,
             std::optional<double> ref) {
    os << engine << ',' << d << ',' << n << ',' << seed << ',' << num(est) << ',';
    if (ref) os << num(*ref) << ',' << num(std::abs(est - *ref));
    else os << ',';
    os << '\n';
}

// ---- compile

Net compile_variant(const RunConfig& c, const Formula& f, int& d) {
    const int n = f.num_vars();
    const std::string& v = c.variant;
    if (v == "standard" || v == "two-layer" || v == "bounded" || v == "tanh" || v == "ball") d = c.dim ? c.dim : n;
    else if (v == "pde") d = c.dim ? c.dim : 2;
    else d = c.dim ? c.dim : 1;

    if (v == "standard") return compile_cnf(f, build_r_relu(c.delta), 1.0, d);
    if (v == "two-layer") return compile_cnf_two_layer(f, c.delta, d);
    if (v == "bounded") return compile_cnf(f, build_r_bounded(bounded_steps_for(c.delta)), 1.0, d);
    if (v == "tanh") {
        const double tau = c.tau > 0 ? c.tau : feasible_tanh_tau(f, d);
        const TanhGadget g = build_r_tanh(tau);
        std::cerr << "tanh gadget: tau=" << num(g.tau) << " kappa=" << num(g.kappa) << " rho=" << num(g.rho)
                  << " delta=" << num(g.delta) << '\n';
        return compile_cnf(f, g.net, g.rho, d);
    }
    if (v == "ball") return compile_ball(f, d, c.p_norm, c.delta);
    if (v == "pde") return compile_pde_source(f, d, c.delta);
    return compile_high_precision(f, d, c.delta);
}

int cmd_compile(const RunConfig& c) {
    const Formula f = load_dimacs(c.input);
    int d = 0;
    const Net net = compile_variant(c, f, d);
    std::cout << "variant=" << c.variant << " n=" << f.num_vars() << " clauses=" << f.num_clauses() << " d=" << d
              << " depth=" << net.depth() << " width=" << net.width() << " nonzeros=[" << join(count_nonzeros(net))
              << "] alphabet=" << (net.alphabet() ? std::to_string(net.alphabet()->size()) : "none") << '\n';
    if (c.variant == "standard") {
        const CnfAudit a = audit_cnf_network(net, f, c.k, c.ck);
        std::cout << "audit: depth " << a.depth << " (expected " << a.expected_depth << "), width " << a.width
                  << " <= " << a.width_bound << ", nonzeros [" << join(a.nonzeros) << "] <= " << a.nonzero_bound
                  << ", violations " << a.violations.size() << '\n';
        for (const auto& w : a.warnings) std::cout << "  warning: " << w << '\n';
        for (const auto& v : a.violations) std::cout << "  violation: " << v << '\n';
    }
    if (c.out.empty()) std::cout << to_json(net) << '\n';
    else save_network(net, c.out);
    return kOk;
}

// ---- integrate

int cmd_integrate(const RunConfig& c) {
    const Net net = load_network(c.input);
    const int d = net.input_dim();
    const Engine e = parse_engine(c.engine);
    Domain dom = Domain::unit_cube();
    if (c.domain == "ball") dom = Domain::make_pball(c.p_norm);
    std::optional<double> ref;
    if (!c.reference.empty()) {
        try {
            ref = std::stod(c.reference);
        } catch (const std::logic_error&) {
            throw UsageError("bad --reference '" + c.reference + "'");
        }
    }
    std::vector<std::uint64_t> fallback{std::uint64_t{1} << 16};
    if (e == Engine::grid) fallback = {32};
    if (e == Engine::onelayer) fallback = {64};
    const auto ns = parse_schedule(c.schedule, fallback);

    Output out(c.out);
    out.os() << config_line(c) << '\n' << kCsvHeader << '\n';
    for (const std::uint64_t n : ns) {
        QuadEstimate q;
        switch (e) {
            case Engine::grid: {
                GridOptions g;
                g.domain = dom;
                q = grid_oracle(net, static_cast<int>(n), g);
                std::cerr << "grid m=" << n << ": certified error " << num(*q.rigorous_error) << '\n';
                break;
            }
            case Engine::mc: q = mc_integrate(net, n, c.seed, dom); break;
            case Engine::qmc: q = qmc_integrate(net, n, dom); break;
            case Engine::onelayer: q = onelayer_integrate(net, dom, static_cast<int>(n)); break;
        }
        csv_row(out.os(), q.engine, d, n, c.seed, q.value, ref);
    }
    return kOk;
}

// ---- convergence

struct Series {
    std::string label;
    std::vector<double> n, err;
};

std::string svg_plot(const std::vector<Series>& series, const std::string& title) {
    const double W = 720, H = 480, L = 70, R = 190, T = 40, B = 55;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.n.size(); ++i) {
            if (!(s.err[i] > 0)) continue;
            x0 = std::min(x0, std::log10(s.n[i]));
            x1 = std::max(x1, std::log10(s.n[i]));
            y0 = std::min(y0, std::log10(s.err[i]));
            y1 = std::max(y1, std::log10(s.err[i]));
        }
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    if (!(x1 >= x0)) {
        o << "<text x=\"" << L << "\" y=\"" << H / 2 << "\">no positive errors to plot</text>\n</svg>\n";
        return o.str();
    }
    x0 = std::floor(x0);
    x1 = std::max(std::ceil(x1), x0 + 1);
    y0 = std::floor(y0);
    y1 = std::max(std::ceil(y1), y0 + 1);
    auto px = [&](double lx) { return L + (lx - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double ly) { return H - B - (ly - y0) / (y1 - y0) * (H - T - B); };
    o << std::fixed << std::setprecision(1);
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int e = static_cast<int>(x0); e <= static_cast<int>(x1); ++e)
        o << "<text x=\"" << px(e) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); ++e)
        o << "<text x=\"" << L - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n"
          << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
          << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">N (points)</text>\n"
      << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">error</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::size_t idx = 0;
    for (const auto& s : series) {
        const char* col = colors[idx % 8];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.n.size(); ++i)
            if (s.err[i] > 0) o << px(std::log10(s.n[i])) << ',' << py(std::log10(s.err[i])) << ' ';
        o << "\"/>\n<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (idx + 1) << "\" fill=\"" << col << "\">"
          << s.label << "</text>\n";
        ++idx;
    }
    // O(1/t) through the first point of the first series.
    const auto& s0 = series.front();
    const double gx0 = std::log10(s0.n.front()), gy0 = std::log10(s0.err.front());
    const double gx1 = x1, gy1 = gy0 - (gx1 - gx0);
    o << "<line x1=\"" << px(gx0) << "\" y1=\"" << py(gy0) << "\" x2=\"" << px(gx1) << "\" y2=\"" << py(std::max(gy1, y0))
      << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n<text x=\"" << W - R + 10 << "\" y=\""
      << T + 16 * (idx + 1) << "\">O(1/t)</text>\n</svg>\n";
    return o.str();
}

struct Item {
    std::string label;
    int d;
    // Integrand for a given seed index and its reference value.
    std::function<std::pair<BatchIntegrand, double>(int)> make;
};

int cmd_convergence(const RunConfig& c) {
    const auto ns = parse_schedule(c.schedule, parse_schedule("6:14", {}));
    if (c.seeds < 1) throw UsageError("--seeds must be >= 1");
    for (const auto& e : c.engines)
        if (e != "qmc" && e != "mc") throw UsageError("convergence engines are qmc and mc");
    const std::uint64_t ref_n = std::uint64_t{1} << c.reference_exp;
    if (ref_n < ns.back()) throw UsageError("--reference-exp must cover the largest N");

    auto qmc_reference = [ref_n](const BatchIntegrand& f, int d) { return qmc_prefix_means(f, d, {ref_n}).front(); };
    std::vector<Item> items;
    if (c.profile == "random-relu") {
        const int d = c.dim ? c.dim : 5;
        for (int depth : c.depths) {
            items.push_back({"depth " + std::to_string(depth), d, [=, &c](int s) {
                                 const Net net = random_relu_network(d, depth, c.width, c.seed + 1000 * s + depth);
                                 const BatchIntegrand f = as_integrand(net);
                                 return std::make_pair(f, qmc_reference(f, d));
                             }});
        }
    } else if (c.profile == "rquad") {
        const int d = c.dim ? c.dim : 2;
        items.push_back({"rquad d=" + std::to_string(d), d, [=, &c](int s) {
                             const CornerIntegrand g = random_corner_integrand(d, c.seed + s);
                             return std::make_pair(g.batch(), g.exact_integral());
                         }});
    } else if (c.profile == "file") {
        if (c.input.empty()) throw UsageError("the file profile needs a network path");
        const Net net = load_network(c.input);
        const int d = net.input_dim();
        const BatchIntegrand f = as_integrand(net);
        double ref = 0;
        if (d <= 4) {
            const int m = static_cast<int>(std::floor(std::pow(static_cast<double>(ref_n), 1.0 / d) + 1e-9));
            const QuadEstimate g = grid_oracle(net, m);
            std::cerr << "reference: grid m=" << m << ", certified error " << num(*g.rigorous_error) << '\n';
            ref = g.value;
        } else {
            ref = qmc_reference(f, d);
        }
        items.push_back({"file", d, [f, ref](int) { return std::make_pair(f, ref); }});
    } else {
        throw UsageError("unknown profile '" + c.profile + "' (random-relu, rquad, file)");
    }

    Output out(c.out);
    out.os() << config_line(c) << '\n' << kCsvHeader << '\n';
    std::vector<Series> plots;
    for (const auto& item : items) {
        std::map<std::string, std::vector<double>> sq;
        double scale = 0;
        for (int s = 0; s < c.seeds; ++s) {
            const auto [f, ref] = item.make(s);
            scale = std::max(scale, std::abs(ref));
            const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
            for (const auto& e : c.engines) {
                std::vector<double> est;
                if (e == "qmc") est = qmc_prefix_means(f, item.d, ns);
                else
                    for (std::size_t i = 0; i < ns.size(); ++i)
                        est.push_back(mc_integrate(f, item.d, ns[i], seed * 7919 + i).value);
                auto& acc = sq[e];
                acc.resize(ns.size(), 0.0);
                for (std::size_t i = 0; i < ns.size(); ++i) {
                    csv_row(out.os(), e, item.d, ns[i], seed, est[i], ref);
                    acc[i] += (est[i] - ref) * (est[i] - ref);
                }
            }
        }
        for (const auto& e : c.engines) {
            Series ser{item.label + " " + e, {}, {}};
            for (std::size_t i = 0; i < ns.size(); ++i) {
                ser.n.push_back(static_cast<double>(ns[i]));
                ser.err.push_back(std::sqrt(sq[e][i] / c.seeds));
            }
            const auto slope = loglog_slope(ser.n, ser.err, 1e-13 * std::max(1.0, scale));
            std::cout << item.label << ' ' << e << " (rms over " << c.seeds << " seeds): slope "
                      << (slope ? num(*slope) : std::string("undefined (errors at rounding level)")) << '\n';
            plots.push_back(std::move(ser));
        }
    }
    if (!c.out.empty()) {
        std::string svg = c.out;
        if (svg.size() > 4 && svg.substr(svg.size() - 4) == ".csv") svg.resize(svg.size() - 4);
        svg += ".svg";
        std::ofstream s(svg);
        if (!s) throw ParseError(svg, "cannot open for writing");
        s << svg_plot(plots, "quadrature error, profile " + c.profile);
        std::cout << "wrote " << c.out << " and " << svg << '\n';
    }
    return kOk;
}

// ---- decide

int cmd_decide(const RunConfig& c) {
    DecideOptions opt;
    opt.engine = parse_engine(c.engine);
    opt.delta = c.delta;
    opt.seed = c.seed;
    opt.samples = parse_schedule(c.schedule, {std::uint64_t{1} << 16}).front();
    std::vector<Formula> corpus;
    if (c.exhaustive > 0) corpus = exhaustive_formulas(c.exhaustive, c.k, c.max_clauses);
    else if (!c.input.empty()) corpus.push_back(load_dimacs(c.input));
    else throw UsageError("decide needs a DIMACS file or --exhaustive n");

    std::size_t agree = 0, certified = 0;
    for (const auto& f : corpus) {
        const Decision d = decide_sat(f, opt);
        const bool truth = brute_force_sat(f);
        agree += d.sat == truth;
        certified += d.certified;
        if (corpus.size() == 1)
            std::cout << "sat=" << d.sat << " estimate=" << num(d.estimate) << " threshold=" << num(d.threshold)
                      << " engine=" << d.engine << " resolution=" << d.resolution << " certified=" << d.certified
                      << " error_bound=" << num(d.error_bound) << " failure_probability=" << num(d.failure_probability)
                      << " brute_force=" << truth << '\n';
        else if (d.sat != truth)
            std::cout << "disagreement:\n" << emit_dimacs(f);
    }
    std::cout << "agreement " << agree << '/' << corpus.size() << ", certified " << certified << '/' << corpus.size()
              << '\n';
    return kOk;
}

// ---- matvec

int cmd_matvec(const RunConfig& c) {
    const Formula f = load_dimacs(c.input);
    const int n = (f.num_vars() + 1) / 2;
    const int d = c.dim ? c.dim : n;
    const EncodedMatrix M = encode_formula(f, d, c.delta);
    const Eigen::VectorXd y = matvec(M, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(M.size())));
    const double norm = spectral_norm(M);
    const double ratio = normalized_ratio(M);
    std::cout << "d=" << d << " size=" << M.size() << " |M1|=" << num(y.norm()) << " |M|=" << num(norm)
              << " ratio=" << num(ratio) << " nonzero=" << (ratio > 0) << " brute_force=" << brute_force_sat(f)
              << " lower_bound=" << num(std::pow(2.0, 1.5 * (d - n))) << '\n';
    // Illustrative only: s-tilde is an unknown constant.
    const double threshold = std::pow(2.0, -n / 2.0) * std::pow(2.0, -(1 - c.s_tilde) * n);
    std::cout << "ratio threshold 2^(-n/2) 2^(-(1-s)n) at s=" << num(c.s_tilde) << ": " << num(threshold)
              << " above=" << (ratio >= threshold) << '\n';
    if (!c.out.empty()) {
        Output out(c.out);
        out.os() << config_line(c) << "\nindex,value\n";
        for (Eigen::Index i = 0; i < y.size(); ++i) out.os() << i << ',' << num(y(i)) << '\n';
    }
    return kOk;
}

// ---- pde-demo

int cmd_pde(const RunConfig& c) {
    const Formula f = load_dimacs(c.input);
    const int d = c.dim ? c.dim : 2;
    if (d != 2 && d != 3) throw InputError("pde-demo supports d = 2 and d = 3");
    const double q = pde_box_side(d);
    const Net src = compile_pde_source(f, d, c.delta);
    const GridField F = sample_network(src, c.grid_m);
    const PoissonResult r = solve_poisson(F);
    const MaxBoundReport rep = verify_maximum_bound(r.u, F, (1 - q) / 2, (1 + q) / 2);
    const double target = rep.V * std::pow(q, d) * std::pow(c.delta, f.num_vars());
    const bool sat = rep.u_min > target / 2;
    std::cout << "d=" << d << " m=" << c.grid_m << " q=" << num(q) << " cg_iterations=" << r.iterations
              << " residual=" << num(r.rel_residual) << '\n'
              << "u_min=" << num(rep.u_min) << " V=" << num(rep.V) << " |f|_L1=" << num(rep.l1_norm)
              << " V|f|_L1=" << num(rep.bound) << " slack=" << num(rep.slack) << " bound_holds=" << rep.holds << '\n'
              << "gap target V q^d delta^n=" << num(target) << " decision=" << sat
              << " brute_force=" << brute_force_sat(f) << '\n';
    if (!c.out.empty()) {
        Output out(c.out);
        out.os() << config_line(c) << '\n' << (d == 2 ? "x,y,value" : "x,y,z,value") << '\n';
        for (std::uint64_t i = 0; i < r.u.size(); ++i) {
            const Eigen::VectorXd x = r.u.point(i);
            for (int j = 0; j < d; ++j) out.os() << num(x(j)) << ',';
            out.os() << num(r.u.values(static_cast<Eigen::Index>(i))) << '\n';
        }
    }
    return kOk;
}

// ---- curve

int cmd_curve(const RunConfig& c) {
    const int d = c.dim ? c.dim : 3;
    const Net curve = build_curve(d, c.delta);
    const double need = std::pow(c.delta, d);
    const double step = need / 8;
    std::size_t found = 0;
    for (const auto& v : scan_curve(curve, c.delta, step)) {
        const bool ok = v.length(step) >= need;
        found += ok;
        std::cout << "corner " << join(v.corner, "") << ": ";
        if (v.samples == 0) std::cout << "not reached\n";
        else
            std::cout << "t in [" << num(v.t_begin) << ", " << num(v.t_end) << "] length " << num(v.length(step))
                      << (ok ? " >= " : " < ") << "delta^d = " << num(need) << '\n';
    }
    std::cout << "intervals found " << found << '/' << (std::size_t{1} << d) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural-network quadrature, SAT reductions and hardness gadgets"};
    app.require_subcommand(1);
    RunConfig c;
    const std::vector<std::string> variants{"standard", "two-layer", "bounded", "tanh", "ball", "pde", "high-precision"};
    const std::vector<std::string> engines{"grid", "mc", "qmc", "onelayer"};

    auto common = [&](CLI::App* s) {
        s->add_option("--seed", c.seed, "random seed");
        s->add_option("--delta", c.delta, "gadget ramp width")->check(CLI::Range(0.0, 0.5));
        s->add_option("--out", c.out, "output path");
        s->add_option("--dim", c.dim, "input dimension (0: default for the subcommand)")->check(CLI::NonNegativeNumber);
    };
    auto* compile = app.add_subcommand("compile", "compile a DIMACS formula into a network");
    common(compile);
    compile->add_option("dimacs", c.input, "DIMACS CNF file")->required();
    compile->add_option("--variant", c.variant, "construction")->check(CLI::IsMember(variants));
    compile->add_option("--k", c.k, "clause width bound for the audit")->check(CLI::PositiveNumber);
    compile->add_option("--ck", c.ck, "clause-count constant for the audit")->check(CLI::PositiveNumber);
    compile->add_option("--p-norm", c.p_norm, "p for the ball variant")->check(CLI::Range(1.0, 1e9));
    compile->add_option("--tau", c.tau, "tanh gadget parameter (0: smallest feasible choice)");

    auto* integrate = app.add_subcommand("integrate", "integrate a serialized network");
    common(integrate);
    integrate->add_option("net", c.input, ".nnet.json file")->required();
    integrate->add_option("--engine", c.engine, "grid, mc, qmc or onelayer")->check(CLI::IsMember(engines));
    integrate->add_option("--n-schedule", c.schedule, "sizes: a:b for 2^a..2^b or a comma list (grid: cells per side; onelayer: T)");
    integrate->add_option("--domain", c.domain, "cube or ball")->check(CLI::IsMember({"cube", "ball"}));
    integrate->add_option("--p-norm", c.p_norm, "p for the ball domain")->check(CLI::Range(1.0, 1e9));
    integrate->add_option("--reference", c.reference, "known integral, fills the reference column");

    auto* conv = app.add_subcommand("convergence", "QMC and MC error against N");
    common(conv);
    conv->add_option("--profile", c.profile, "random-relu, rquad or file")->check(CLI::IsMember({"random-relu", "rquad", "file"}));
    conv->add_option("--net", c.input, "network for the file profile");
    conv->add_option("--n-schedule", c.schedule, "sizes, default 6:14");
    conv->add_option("--engines", c.engines, "qmc and/or mc")->delimiter(',');
    conv->add_option("--depths", c.depths, "hidden layers for random-relu")->delimiter(',');
    conv->add_option("--width", c.width, "width for random-relu")->check(CLI::PositiveNumber);
    conv->add_option("--seeds", c.seeds, "independent integrands per series");
    conv->add_option("--reference-exp", c.reference_exp, "QMC reference uses 2^e points")->check(CLI::Range(1, 32));

    auto* decide = app.add_subcommand("decide", "decide satisfiability through quadrature");
    common(decide);
    decide->add_option("dimacs", c.input, "DIMACS CNF file");
    decide->add_option("--engine", c.engine, "grid, mc or qmc")->check(CLI::IsMember(engines));
    decide->add_option("--n-schedule", c.schedule, "sample count for mc/qmc");
    decide->add_option("--exhaustive", c.exhaustive, "run every formula over n variables instead")->check(CLI::Range(1, 3));
    decide->add_option("--k", c.k, "clause width for --exhaustive")->check(CLI::PositiveNumber);
    decide->add_option("--max-clauses", c.max_clauses, "clause count for --exhaustive")->check(CLI::NonNegativeNumber);

    auto* mv = app.add_subcommand("matvec", "encoded matrix M for a formula over 2n variables");
    common(mv);
    mv->add_option("dimacs", c.input, "DIMACS CNF file")->required();
    mv->add_option("--s-tilde", c.s_tilde, "constant in the illustrative ratio threshold")->check(CLI::Range(0.0, 1.0));

    auto* pde = app.add_subcommand("pde-demo", "Poisson solve with a compiled source");
    common(pde);
    pde->add_option("dimacs", c.input, "DIMACS CNF file")->required();
    pde->add_option("--m", c.grid_m, "grid points per side")->check(CLI::Range(3, 4097));

    auto* curve = app.add_subcommand("curve", "scan the orthant-visiting curve");
    common(curve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    try {
        if (c.subcommand == "compile") return cmd_compile(c);
        if (c.subcommand == "integrate") return cmd_integrate(c);
        if (c.subcommand == "convergence") return cmd_convergence(c);
        if (c.subcommand == "decide") return cmd_decide(c);
        if (c.subcommand == "matvec") return cmd_matvec(c);
        if (c.subcommand == "pde-demo") return cmd_pde(c);
        return cmd_curve(c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << '\n';
        return kBudget;
    }
}
