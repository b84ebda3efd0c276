#pragma once

#include <cstdint>
#include <vector>

#include "nnquad/quadrature.hpp"

namespace nnquad {

// ReLU network R^d -> R with `hidden` hidden layers of the given width.
// Weights: truncated normal, std sqrt(2 / fan_in), cut at two standard
// deviations; biases uniform on +-1/sqrt(fan_in).
Net random_relu_network(int d, int hidden, int width, std::uint64_t seed);

// Sum over corners z of min_i r(|z_i - x_i|), the adversarial integrand.
struct CornerIntegrand {
    std::vector<std::vector<int>> corners;
    double delta = 0.2;

    int dim() const { return static_cast<int>(corners.front().size()); }
    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    BatchIntegrand batch() const;  // holds a copy
    // Network form, exact on [0,1]^d.
    Net network() const;
    // Exact integral over [0,1]^d.
    double exact_integral() const;
};

// 2^(d-1) distinct random corners of {0,1}^d.
CornerIntegrand random_corner_integrand(int d, std::uint64_t seed, double delta = 0.2);

}  // namespace nnquad
