#pragma once

#include <cstdint>
#include <functional>

#include "nnquad/compile.hpp"

namespace nnquad {

// Values on the uniform grid of m points per side over [0,1]^d (boundary
// included), first coordinate fastest; h = 1/(m-1).
struct GridField {
    int d = 2;
    int m = 0;
    Eigen::VectorXd values;

    double h() const { return 1.0 / (m - 1); }
    std::uint64_t size() const;
    Eigen::VectorXd point(std::uint64_t index) const;
};

GridField sample_field(const std::function<double(const Eigen::VectorXd&)>& f, int d, int m);
GridField sample_network(const Net& net, int m);

struct PoissonOptions {
    double rel_tol = 1e-10;
    long long max_iterations = -1;  // default 10 m^2
};

struct PoissonResult {
    GridField u;
    long long iterations = 0;
    double rel_residual = 0;
};

// -Laplace u = f on (0,1)^d (d = 2 or 3), u = 0 on the boundary; finite
// differences (5- or 7-point) solved by Jacobi-preconditioned CG.
PoissonResult solve_poisson(const GridField& f, const PoissonOptions& opt = {});

// Lower bound on the Dirichlet Green's function over a subdomain whose
// diameter is at most half its distance to the boundary.
double greens_lower_bound(int d, double dist);

struct MaxBoundReport {
    double u_min = 0;    // min of u over grid points in the box
    double l1_norm = 0;  // ||f||_{L1(box)}, midpoint sum
    double sup_norm = 0; // max |f| on the grid
    double V = 0;
    double bound = 0;    // V * l1_norm
    double slack = 0;    // sup_norm * h^2
    bool holds = false;  // u_min >= bound - slack
};

// Check u >= V ||f||_{L1(box)} - ||f||_inf h^2 on the box [lo, hi]^d, with f
// supported in the box.
MaxBoundReport verify_maximum_bound(const GridField& u, const GridField& f, double lo, double hi);

}  // namespace nnquad
