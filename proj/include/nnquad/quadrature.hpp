#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nnquad/network.hpp"

namespace nnquad {

using Net = Network<double>;

// Evaluates a scalar integrand at every column of X.
using BatchIntegrand = std::function<Eigen::VectorXd(const Eigen::MatrixXd& X)>;

BatchIntegrand as_integrand(const Net& net);  // holds a copy of net

// Integration region.  Engines return the mean value, i.e. the integral against
// the uniform probability measure on the region.
struct Domain {
    enum class Kind { cube, box, pball } kind = Kind::cube;
    Eigen::VectorXd lo, hi;  // box only
    double p = 2;            // pball only: unit l_p ball in R^d

    static Domain unit_cube() { return {}; }
    static Domain make_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static Domain make_pball(double p);
};

// Lebesgue volume of the unit l_p ball in R^d.
double pball_volume(int d, double p);

struct QuadEstimate {
    std::string engine;
    int dim = 0;
    double value = 0;
    std::optional<double> rigorous_error;  // grid oracle only
    double std_error = std::numeric_limits<double>::quiet_NaN();  // sample standard error (mc)
    std::uint64_t evaluations = 0;
};

struct GridOptions {
    Domain domain;
    double max_cells = 1e8;
    // Per-cell affine enclosures (ReLU networks only).
    bool enclosures = true;
};

// Midpoint rule on m^d equal cells.  The reported error is rigorous up to
// floating-point rounding: the smaller of lipschitz_bound * sqrt(d) * h / 2 and
// the summed width of per-cell enclosures.
QuadEstimate grid_oracle(const Net& net, int m, const GridOptions& opt = {});
// Midpoint rule for a black-box integrand; the error needs a Lipschitz constant.
QuadEstimate grid_midpoint(const BatchIntegrand& f, int d, int m, const GridOptions& opt = {},
                           std::optional<double> lipschitz = std::nullopt);

QuadEstimate mc_integrate(const BatchIntegrand& f, int d, std::uint64_t n, std::uint64_t seed,
                          const Domain& dom = Domain::unit_cube());
QuadEstimate mc_integrate(const Net& net, std::uint64_t n, std::uint64_t seed, const Domain& dom = Domain::unit_cube());

// Mean over the first n Sobol points (origin first); cube and box domains.
QuadEstimate qmc_integrate(const BatchIntegrand& f, int d, std::uint64_t n, const Domain& dom = Domain::unit_cube());
QuadEstimate qmc_integrate(const Net& net, std::uint64_t n, const Domain& dom = Domain::unit_cube());
// Sobol means over nested prefixes of one sequence on [0,1]^d; ns ascending.
std::vector<double> qmc_prefix_means(const BatchIntegrand& f, int d, const std::vector<std::uint64_t>& ns);

// Least-squares slope of log y against log x; empty when fewer than two
// points or some y <= floor (the fit would only see rounding noise).
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor = 1e-13);

}  // namespace nnquad
