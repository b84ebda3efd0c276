#pragma once

#include <string>
#include <vector>

#include "nnquad/cnf.hpp"
#include "nnquad/network.hpp"

namespace nnquad {

using Net = Network<double>;

// ReLU gadget r: 0 on x <= 1/2, linear ramp, 1 on x >= 1 - delta; width 2, depth 2.
Net build_r_relu(double delta);

// Ramp 2^n (x - 1/2) clipped to [0,1] with weights in {-2,-1,0,1,2}; depth 1 + n_steps.
Net build_r_bounded(int n_steps);
// Steps needed so the bounded gadget saturates by 1 - delta.
int bounded_steps_for(double delta);

struct TanhGadget {
    Net net;
    double tau;
    double kappa;  // exp(-2/tau)
    double rho;    // 1 - kappa
    double delta;  // 1/2 - 2 tau
};

// r_tau(x) = (1 + tanh((2x - 1 - 2tau) / (2 tau^2))) / 2; one hidden neuron.
TanhGadget build_r_tanh(double tau);
// A tau meeting tau <= 2/log(2 max(#clauses, k)) and kappa < delta^d rho.
double feasible_tanh_tau(const Formula& f, int d);

// x -> r(sum over literals r(gamma x_i)) - rho on R^d.
Net compile_clause(const Clause& c, const Net& r, double rho, int d);
// x -> r(rho + sum_C (r(sum r(gamma x_i)) - rho)) on R^d; only x_1..x_n are read.
Net compile_cnf(const Formula& f, const Net& r, double rho, int d);
// Variant with two hidden layers built from one neuron per satisfying corner of each clause.
Net compile_cnf_two_layer(const Formula& f, double delta, int d);

// Hat s(t) = 1 - sigma(delta - t)/delta - sigma(t - (1 - delta))/delta.
Net build_hat(double delta);
// Space-filling curve f_d: [0,1] -> [0,1]^d passing within delta of every corner.
Net build_curve(int d, double delta);
// Longest run of scan points t = 0, step, 2 step, ... with |f(t) - z|_inf <= delta,
// for every corner z (bit j of the corner index is z_{j+1}).
struct CurveVisit {
    std::vector<int> corner;
    int samples = 0;  // 0: corner never approached
    double t_begin = 0, t_end = 0;

    // Length covered by the run at the scan resolution.
    double length(double step) const { return samples * step; }
};
std::vector<CurveVisit> scan_curve(const Net& curve, double delta, double step);

// Formula over n > d variables on [0,1]^d; the last coordinate feeds a curve.
Net compile_high_precision(const Formula& f, int d, double delta);

// T_{n,p}: the unit cube onto a region containing the corner images inside B_{d,p}.
AffineMap<double> ball_map(int n, int d, double p);
Net compile_ball(const Formula& f, int d, double p, double delta);
Eigen::VectorXd project_to_cube(const Eigen::VectorXd& x);

// Side length of the central box carrying the PDE source.
double pde_box_side(int d);
Net compile_pde_source(const Formula& f, int d, double delta);

// Bounds expected of a compiled network; see audit_cnf_network.
struct CnfAudit {
    int depth = 0, expected_depth = 0;
    int width = 0, width_bound = 0;
    std::vector<int> nonzeros;
    int nonzero_bound = 0;
    std::vector<std::string> violations;  // structural failures
    std::vector<std::string> warnings;    // formula outside the size class
};

// Check depth, width, per-matrix nonzeros, alphabet and the block connectivity
// of a standard ReLU compilation.
CnfAudit audit_cnf_network(const Net& net, const Formula& f, int k, double ck);

}  // namespace nnquad
