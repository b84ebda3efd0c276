#pragma once

#include "nnquad/quadrature.hpp"

namespace nnquad {

// Mean of sigma(a.x - b) over the Euclidean unit ball B_d (closed form).
double onelayer_ball(const Eigen::VectorXd& a, double b);

// Integral of sigma(a.x - b) over [-1, 1]^d (Lebesgue measure) through a
// one-dimensional Fourier integral truncated at T and summed Gauss rules of order p.
double onelayer_cube(const Eigen::VectorXd& a, double b, int T = 64, int p = 24);

// Mean of a depth-2 ReLU network over the unit cube [0,1]^d or the Euclidean ball.
QuadEstimate onelayer_integrate(const Net& net, const Domain& dom = Domain::unit_cube(), int T = 64, int p = 24);

}  // namespace nnquad
