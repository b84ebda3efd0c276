#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#if __has_include(<boost/math/quadrature/tanh_sinh.hpp>)
#include <boost/math/quadrature/tanh_sinh.hpp>
#define HAVE_BOOST_QUADRATURE 1
#endif

#include "helpers.hpp"

using namespace nnquad;
using testing::Rng;

namespace {

Net constant_net(int d, double c) {
    return affine_network<double>(Eigen::MatrixXd::Zero(1, d), Eigen::VectorXd::Constant(1, c));
}

double star_discrepancy_1d(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        d = std::max({d, (i + 1) / n - x[i], x[i] - i / n});
    return d;
}

// Anchored boxes with corners at point coordinates (and 1).
double star_discrepancy_2d(const Eigen::MatrixXd& P) {
    const auto n = P.cols();
    std::vector<double> xs(P.row(0).data(), P.row(0).data() + n), ys;
    for (Eigen::Index i = 0; i < n; ++i) ys.push_back(P(1, i));
    xs.push_back(1);
    ys.push_back(1);
    double d = 0;
    for (double bx : xs)
        for (double by : ys) {
            Eigen::Index open = 0, closed = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                open += P(0, i) < bx && P(1, i) < by;
                closed += P(0, i) <= bx && P(1, i) <= by;
            }
            const double vol = bx * by;
            d = std::max({d, vol - open / double(n), closed / double(n) - vol});
        }
    return d;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
    const GaussRule& g1 = gauss_legendre(1);
    CHECK(g1.nodes == std::vector<double>{0.0});
    CHECK(g1.weights[0] == doctest::Approx(2.0));
    const GaussRule& g2 = gauss_legendre(2);
    CHECK(g2.nodes[0] == doctest::Approx(-1 / std::sqrt(3.0)));
    CHECK(g2.nodes[1] == doctest::Approx(1 / std::sqrt(3.0)));
    CHECK(g2.weights[0] == doctest::Approx(1.0));
    const GaussRule& g3 = gauss_legendre(3);
    double x4 = 0;
    for (int i = 0; i < 3; ++i) x4 += g3.weights[i] * std::pow(g3.nodes[i], 4);
    CHECK(x4 == doctest::Approx(0.4).epsilon(1e-14));
    for (int p = 1; p <= 64; ++p) {
        const GaussRule& g = gauss_legendre(p);
        double w = 0, top = 0;
        for (int i = 0; i < p; ++i) {
            w += g.weights[i];
            top += g.weights[i] * std::pow(g.nodes[i], 2 * p - 2);
        }
        CHECK(w == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(top == doctest::Approx(2.0 / (2 * p - 1)).epsilon(1e-11));
        CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
    }
    CHECK_THROWS_AS(gauss_legendre(0), InputError);
    CHECK_THROWS_AS(gauss_legendre(65), InputError);
}

TEST_CASE("incomplete beta") {
    CHECK(incomplete_beta(0, 2, 3) == 0.0);
    CHECK(incomplete_beta(1, 2, 3) == 1.0);
    CHECK(incomplete_beta(0.25, 0.5, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(beta_fn(0.5, 1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(incomplete_beta(1.5, 1, 1), InputError);
    CHECK_THROWS_AS(incomplete_beta(0.5, 0, 1), InputError);
#ifdef HAVE_BOOST_QUADRATURE
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double x : {0.05, 0.25, 0.5, 0.7, 0.95})
        for (auto [a, b] : {std::pair{0.5, 1.0}, {0.5, 2.0}, {0.5, 3.5}, {2.0, 3.0}, {5.0, 1.5}, {0.5, 0.5}}) {
            const double num =
                ts.integrate([&](double v) { return std::pow(v, a - 1) * std::pow(1 - v, b - 1); }, 0.0, x, 1e-15);
            CHECK(incomplete_beta(x, a, b) == doctest::Approx(num / std::beta(a, b)).epsilon(1e-12));
        }
    // Half-width integral of (1 - t^2)^((d-1)/2) through the incomplete beta.
    const double alpha = 0.5;
    const int d = 3;
    const double lhs = ts.integrate([&](double t) { return std::pow(1 - t * t, (d - 1) / 2.0); }, -alpha, alpha, 1e-15);
    const double rhs = incomplete_beta(alpha * alpha, 0.5, (d + 1) / 2.0) * beta_fn(0.5, (d + 1) / 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
#endif
}

TEST_CASE("Sobol points") {
    SobolSequence skip(2, default_direction_numbers(), false);
    const Eigen::MatrixXd P = skip.take(3);
    CHECK(P.col(0) == Eigen::Vector2d(0.5, 0.5));
    CHECK(P.col(1) == Eigen::Vector2d(0.75, 0.25));
    CHECK(P.col(2) == Eigen::Vector2d(0.25, 0.75));

    SobolSequence with(2);
    const Eigen::MatrixXd Q = with.take(4);
    CHECK(Q.col(0).isZero(0));
    CHECK(Q.rightCols(3) == P);

    // Every dyadic prefix is a net: one point per elementary interval in 1D.
    SobolSequence s5(5);
    const Eigen::MatrixXd X = s5.take(1024);
    for (int j = 0; j < 5; ++j) {
        std::vector<int> hits(1024, 0);
        for (Eigen::Index i = 0; i < 1024; ++i) ++hits[static_cast<int>(X(j, i) * 1024)];
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    CHECK_THROWS_AS(SobolSequence(default_direction_numbers().max_dim() + 1), InputError);
    CHECK(default_direction_numbers().max_dim() >= 1024);
}

TEST_CASE("Sobol streams have low star discrepancy") {
    const int n = 1024;
    SobolSequence seq(4);
    const Eigen::MatrixXd X = seq.take(n);
    Rng g(31);
    double best_mc = 1;
    for (int s = 0; s < 100; ++s) {
        std::vector<double> u(n);
        for (auto& v : u) v = testing::uniform(g);
        best_mc = std::min(best_mc, star_discrepancy_1d(u));
    }
    for (int j = 0; j < 4; ++j) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = X(j, i);
        CHECK(star_discrepancy_1d(col) < best_mc);
    }
    const Eigen::MatrixXd P = SobolSequence(2).take(256);
    const double sobol2 = star_discrepancy_2d(P);
    double worst_random = 1;
    for (int s = 0; s < 5; ++s) worst_random = std::min(worst_random, star_discrepancy_2d(testing::random_points(g, 2, 256)));
    CHECK(sobol2 < worst_random);
}

TEST_CASE("direction-number files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "nnquad_dirnum_test";
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const DirectionNumbers dn = load_direction_numbers(write("ok.txt", "# header\n2 1 0 1\n3 2 1 1 3\n"));
    CHECK(dn.max_dim() == 3);
    CHECK(dn.entry(3).m == std::vector<std::uint32_t>{1, 3});
    CHECK_THROWS_AS(load_direction_numbers(write("even.txt", "2 1 0 2\n")), ParseError);
    CHECK_THROWS_AS(load_direction_numbers(write("big.txt", "2 2 1 1 5\n")), ParseError);
    CHECK_THROWS_AS(load_direction_numbers(write("order.txt", "3 1 0 1\n")), ParseError);
    CHECK_THROWS_AS(load_direction_numbers(write("short.txt", "2 2 1 1\n")), ParseError);
    CHECK_THROWS_AS(load_direction_numbers((dir / "missing.txt").string()), ParseError);

    // Same leading dimensions as the bundled table.
    SobolSequence a(3, dn), b(3);
    CHECK(a.take(64) == b.take(64));

    const std::string path = write("env.txt", "2 1 0 1\n");
    setenv("NNQUAD_DATA", path.c_str(), 1);
    CHECK(default_direction_path() == path);
    setenv("NNQUAD_DATA", dir.c_str(), 1);
    CHECK(default_direction_path() == (dir / "sobol_directions.txt").string());
    unsetenv("NNQUAD_DATA");
    fs::remove_all(dir);
}

TEST_CASE("grid oracle") {
    const QuadEstimate c = grid_oracle(constant_net(3, 0.7), 8);
    CHECK(c.value == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(*c.rigorous_error == 0.0);

    const Net r = build_r_relu(0.25);
    const QuadEstimate qr = grid_oracle(r, 64);
    CHECK(std::abs(qr.value - 0.375) <= *qr.rigorous_error + 1e-15);

    // Three nested ramps: zero below 21/32, one above 43/64.
    const Formula x1(1, {Clause({{1, false}})});
    const Net f = compile_cnf(x1, r, 1.0, 1);
    const QuadEstimate qf = grid_oracle(f, 256);
    CHECK(std::abs(qf.value - 43.0 / 128) <= *qf.rigorous_error + 1e-15);

    const Formula contra(2, {Clause({{1, false}}), Clause({{1, true}})});
    const QuadEstimate qz = grid_oracle(compile_cnf(contra, r, 1.0, 2), 16);
    CHECK(qz.value == 0.0);
    CHECK(*qz.rigorous_error == 0.0);

    CHECK_THROWS_AS(grid_oracle(constant_net(5, 1), 100), BudgetError);
}

TEST_CASE("grid oracle bound is honest and the hierarchy is exact") {
    Rng g(32);
    for (int t = 0; t < 20; ++t) {
        const int d = testing::uniform_int(g, 1, 3);
        const Net net = testing::random_net(g, d, 1, testing::uniform_int(g, 2, 4), 6);
        const int m = d == 1 ? 64 : (d == 2 ? 32 : 16);
        GridOptions flat;
        flat.enclosures = false;
        const QuadEstimate h = grid_oracle(net, m);
        const QuadEstimate l = grid_oracle(net, m, flat);
        CHECK(h.value == doctest::Approx(l.value).epsilon(1e-12));
        CHECK(*h.rigorous_error <= *l.rigorous_error + 1e-15);
        // A much finer grid lands inside the coarse certificate.
        const QuadEstimate fine = grid_oracle(net, m * 8);
        CHECK(std::abs(fine.value - h.value) <= *h.rigorous_error + *fine.rigorous_error + 1e-12);
    }
    // One-layer closed form as the truth.
    for (int t = 0; t < 10; ++t) {
        const int d = testing::uniform_int(g, 1, 3);
        const Eigen::VectorXd a = testing::random_matrix(g, d, 1).col(0);
        const double b = testing::uniform(g, -1, 1);
        std::vector<Layer<double>> layers{{a.transpose(), Eigen::VectorXd::Constant(1, -b)},
                                          {Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1)}};
        const Net neuron(Activation::relu, layers);
        // Map [0,1]^d onto [-1,1]^d.
        AffineMap<double> to_sym{Eigen::VectorXd::Constant(d, 2), Eigen::VectorXd::Constant(d, -1)};
        const QuadEstimate q = grid_oracle(affine_wrap(neuron, to_sym), d == 3 ? 24 : 64);
        const double truth = testing::vertex_formula(a, b) / std::pow(2.0, d);
        CHECK(std::abs(q.value - truth) <= *q.rigorous_error + 1e-14);
    }
}

TEST_CASE("grid oracle on the Euclidean ball") {
    GridOptions o;
    o.domain = Domain::make_pball(2);
    const QuadEstimate c = grid_oracle(constant_net(2, 0.3), 64, o);
    CHECK(std::abs(c.value - 0.3) <= *c.rigorous_error + 1e-12);
    CHECK(*c.rigorous_error < 0.05);
    CHECK(pball_volume(2, 2) == doctest::Approx(M_PI));
    CHECK(pball_volume(3, 2) == doctest::Approx(4 * M_PI / 3));
    CHECK(pball_volume(2, 1) == doctest::Approx(2.0));
}

TEST_CASE("Monte Carlo") {
    CHECK(mc_integrate(constant_net(2, 0.4), 100, 1).value == doctest::Approx(0.4));
    const Net r = build_r_relu(0.25);
    const QuadEstimate q = mc_integrate(r, 1000000, 7);
    CHECK(std::abs(q.value - 0.375) <= 0.002);
    CHECK(q.std_error > 0);
    CHECK(mc_integrate(r, 1000, 7).value == mc_integrate(r, 1000, 7).value);
    CHECK(mc_integrate(r, 1000, 7).value != mc_integrate(r, 1000, 8).value);
    // Rejection sampling on the disc: mean of |x|^2 is 1/2.
    const BatchIntegrand sq = [](const Eigen::MatrixXd& X) -> Eigen::VectorXd {
        return X.colwise().squaredNorm().transpose();
    };
    const QuadEstimate b = mc_integrate(sq, 2, 200000, 3, Domain::make_pball(2));
    CHECK(std::abs(b.value - 0.5) <= 4 * b.std_error);
}

TEST_CASE("QMC") {
    CHECK(qmc_integrate(constant_net(3, 0.25), 37).value == doctest::Approx(0.25).epsilon(1e-15));
    const Net r = build_r_relu(0.25);
    CHECK(std::abs(qmc_integrate(r, 1 << 14).value - 0.375) < 1e-4);
    const BatchIntegrand f = as_integrand(r);
    const auto means = qmc_prefix_means(f, 1, {16, 64, 1024});
    CHECK(means[2] == qmc_integrate(r, 1024).value);
    CHECK(means[0] == qmc_integrate(r, 16).value);
    CHECK_THROWS_AS(qmc_integrate(r, 16, Domain::make_pball(2)), InputError);
}

TEST_CASE("engines agree on small networks") {
    Rng g(33);
    for (int t = 0; t < 30; ++t) {
        const int d = testing::uniform_int(g, 1, 3);
        const Net net = testing::random_net(g, d, 1, 3, 5);
        const QuadEstimate grid = grid_oracle(net, d == 3 ? 64 : 256);
        const QuadEstimate mc = mc_integrate(net, 100000, t);
        const QuadEstimate qmc = qmc_integrate(net, 1 << 14);
        CHECK(std::abs(mc.value - grid.value) <= *grid.rigorous_error + 4.5 * mc.std_error);
        CHECK(std::abs(qmc.value - grid.value) <= *grid.rigorous_error + 1e-3);
    }
}

TEST_CASE("integration commutes with affine output maps") {
    Rng g(34);
    const Net net = testing::random_net(g, 2, 1, 2, 4);
    AffineMap<double> m{Eigen::VectorXd::Constant(1, 3), Eigen::VectorXd::Constant(1, 1)};
    const Net w = affine_wrap(net, m, Side::output);
    CHECK(grid_oracle(w, 32).value == doctest::Approx(3 * grid_oracle(net, 32).value + 1).epsilon(1e-12));
    CHECK(mc_integrate(w, 5000, 2).value == doctest::Approx(3 * mc_integrate(net, 5000, 2).value + 1).epsilon(1e-12));
    CHECK(qmc_integrate(w, 4096).value == doctest::Approx(3 * qmc_integrate(net, 4096).value + 1).epsilon(1e-12));
    CHECK(onelayer_integrate(w).value == doctest::Approx(3 * onelayer_integrate(net).value + 1).epsilon(1e-9));
}

TEST_CASE("one-layer integral on the ball") {
    const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
    CHECK(onelayer_ball(e1, -2) == doctest::Approx(2.0));
    CHECK(onelayer_ball(e1, 1.5) == 0.0);
    CHECK(onelayer_ball(Eigen::VectorXd::Ones(1), 0) == doctest::Approx(0.25).epsilon(1e-12));
    // Continuity across the branch points.
    Rng g(35);
    for (int d : {1, 2, 3, 5}) {
        const Eigen::VectorXd a = testing::random_matrix(g, d, 1).col(0);
        const double na = a.norm();
        for (double b0 : {-na, 0.0, na}) {
            const double h = 1e-9;
            CHECK(std::abs(onelayer_ball(a, b0 + h) - onelayer_ball(a, b0 - h)) < 1e-6);
        }
    }
    // Against Monte Carlo on the ball.
    for (int d : {2, 3}) {
        const Eigen::VectorXd a = testing::random_matrix(g, d, 1).col(0);
        const double b = testing::uniform(g, -0.5, 0.5);
        std::vector<Layer<double>> layers{{a.transpose(), Eigen::VectorXd::Constant(1, -b)},
                                          {Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1)}};
        const QuadEstimate mc = mc_integrate(Net(Activation::relu, layers), 400000, 9, Domain::make_pball(2));
        CHECK(std::abs(onelayer_ball(a, b) - mc.value) <= 4 * mc.std_error);
    }
}

TEST_CASE("one-layer integral on the cube") {
    // d = 1 closed form.  The truncated tail decays like T^-3 here: a few 1e-6 at T = 64.
    for (auto [a, b] : {std::pair{1.0, 0.0}, {2.0, 0.5}, {-0.7, 0.2}, {0.3, -0.1}, {1.0, 0.5}, {0.5, 0.25}}) {
        const double lo = -std::abs(a) - b, hi = std::abs(a) - b;
        const double truth = (std::pow(std::max(hi, 0.0), 2) - std::pow(std::max(lo, 0.0), 2)) / (2 * std::abs(a));
        const Eigen::VectorXd av = Eigen::VectorXd::Constant(1, a);
        CHECK(std::abs(onelayer_cube(av, b, 64, 16) - truth) <= 5e-6);
        CHECK(std::abs(onelayer_cube(av, b, 128, 16) - truth) <= 1e-6);
    }
    Rng g(36);
    for (int t = 0; t < 20; ++t) {
        const int d = 1 + t % 3;
        const Eigen::VectorXd a = testing::random_matrix(g, d, 1).col(0);
        const double b = testing::uniform(g, -0.5, 0.5) * a.lpNorm<1>();
        CHECK(std::abs(onelayer_cube(a, b) - testing::vertex_formula(a, b)) <= 1e-5);
    }
    // Saturated branches and zero weights.
    const Eigen::Vector2d a(0.5, -0.25);
    CHECK(onelayer_cube(a, 1.0) == 0.0);
    CHECK(onelayer_cube(a, -1.0) == doctest::Approx(4.0));
    CHECK(onelayer_cube(Eigen::Vector2d::Zero(), -0.5) == doctest::Approx(2.0));
    CHECK(onelayer_cube(Eigen::Vector2d(0.0, 1.0), 0.2) == doctest::Approx(2 * testing::vertex_formula(Eigen::VectorXd::Ones(1), 0.2)).epsilon(1e-5));
}

TEST_CASE("one-layer engine on networks") {
    Rng g(37);
    const Net zero = affine_network<double>(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1));
    std::vector<Layer<double>> zl{{Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3)},
                                  {Eigen::MatrixXd::Zero(1, 3), Eigen::VectorXd::Zero(1)}};
    CHECK(onelayer_integrate(Net(Activation::relu, zl)).value == 0.0);
    for (int t = 0; t < 5; ++t) {
        const Net net = testing::random_net(g, 2, 1, 2, 5);
        const QuadEstimate grid = grid_oracle(net, 512);
        CHECK(std::abs(onelayer_integrate(net).value - grid.value) <= *grid.rigorous_error + 1e-5);
    }
    const Net deep = testing::random_net(g, 2, 1, 3, 4);
    CHECK_THROWS_AS(onelayer_integrate(deep), InputError);
}

TEST_CASE("Kaiming test networks") {
    const Net net = random_relu_network(5, 3, 100, 1);
    CHECK(net.depth() == 4);
    CHECK(net.input_dim() == 5);
    CHECK(net.width() == 100);
    const auto& W = net.layer(1).weights;
    const double sigma = std::sqrt(2.0 / 100);
    CHECK(W.cwiseAbs().maxCoeff() <= 2 * sigma);
    const double sd = std::sqrt(W.array().square().mean());
    // Normal truncated at two standard deviations keeps 0.88 of the spread.
    CHECK(sd == doctest::Approx(0.8796 * sigma).epsilon(0.03));
    CHECK(random_relu_network(5, 3, 100, 1).layer(2).weights == net.layer(2).weights);
}

TEST_CASE("adversarial corner integrand") {
    for (int d : {1, 2, 3, 4}) {
        const CornerIntegrand f = random_corner_integrand(d, 5);
        CHECK(f.corners.size() == std::size_t{1} << (d - 1));
        for (const auto& z : f.corners) {
            Eigen::VectorXd x(d), opp(d);
            for (int i = 0; i < d; ++i) {
                x(i) = z[i];
                opp(i) = 1 - z[i];
            }
            // Only the opposite corner can contribute at its own position.
            CornerIntegrand single{{z}, f.delta};
            CHECK(single(x) == 0.0);
            CHECK(single(opp) == 1.0);
        }
        Rng g(38 + d);
        const Eigen::MatrixXd X = testing::random_points(g, d, 2000);
        const Eigen::VectorXd v = f.batch()(X);
        CHECK(v.minCoeff() >= 0.0);
        CHECK(v.maxCoeff() <= static_cast<double>(f.corners.size()));
        CHECK((evaluate(f.network(), X).row(0).transpose() - v).cwiseAbs().maxCoeff() < 1e-12);
        const QuadEstimate mc = mc_integrate(f.batch(), d, 200000, 11);
        CHECK(std::abs(mc.value - f.exact_integral()) <= 4 * mc.std_error);
    }
}
