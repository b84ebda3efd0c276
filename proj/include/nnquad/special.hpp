#pragma once

#include <vector>

namespace nnquad {

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Order p in [1, 64]; exact for polynomials of degree <= 2p - 1.
const GaussRule& gauss_legendre(int p);

// Complete beta function B(a, b).
double beta_fn(double a, double b);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double x, double a, double b);

}  // namespace nnquad
