#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nnquad/cnf.hpp"
#include "nnquad/quadrature.hpp"

namespace nnquad {

// Integral is <= kappa for unsatisfiable formulas and >= nu*rho otherwise.
struct GapParams {
    double kappa = 0;
    double rho = 1;
    double nu = 1;

    double threshold() const { return (nu * rho + kappa) / 2; }
    double margin() const { return (nu * rho - kappa) / 2; }
};

enum class Engine { grid, mc, qmc, onelayer };
Engine parse_engine(const std::string& s);
const char* to_string(Engine e);

struct Decision {
    bool sat = false;
    double estimate = 0;
    double threshold = 0;
    // Grid: certified when the rigorous error is below the margin or the
    // error interval does not contain the threshold.
    bool certified = false;
    double error_bound = 0;
    // MC: Chebyshev bound on the probability of a wrong answer (integrand in [0,1]).
    double failure_probability = 0;
    int resolution = 0;            // grid cells per side or sample count
    std::string engine;
};

// Threshold an integral estimate strictly at (nu rho + kappa) / 2.
Decision decide_from_estimate(const QuadEstimate& q, const GapParams& gap);

struct DecideOptions {
    Engine engine = Engine::grid;
    double delta = 0.25;
    std::uint64_t samples = 1 << 16;
    std::uint64_t seed = 0;
    double max_cells = 1e8;
};

// Grid resolutions 4, 8, 12, 16, 24, 32, 48, ... (all multiples of 4).
int next_resolution(int m);

// Compile on [0,1]^n and threshold its integral.  The grid engine walks
// next_resolution until the decision is certified or the budget is spent.
Decision decide_sat(const Formula& f, const DecideOptions& opt = {});

// Indices (ascending) of the largest subset with spread <= 2 eps (up to a
// 1e-12 relative slack); ties go to the window with the smallest values.
std::vector<std::size_t> largest_cluster(const std::vector<double>& y, double eps);

// Runs the estimator l times with seeds 0..l-1 and returns the median
// (lower middle) member of the largest cluster.
double boost(const std::function<double(std::uint64_t)>& estimator, int l, double eps);

}  // namespace nnquad
