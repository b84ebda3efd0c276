#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "nnquad/nnquad.hpp"

namespace testing {

using nnquad::Net;
using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo = 0, double hi = 1) { return std::uniform_real_distribution<double>(lo, hi)(g); }
inline int uniform_int(Rng& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Eigen::MatrixXd random_matrix(Rng& g, int rows, int cols, double scale = 1) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(g, -scale, scale);
    return m;
}

inline Eigen::MatrixXd random_points(Rng& g, int d, int n, double lo = 0, double hi = 1) {
    Eigen::MatrixXd x(d, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < d; ++i) x(i, j) = uniform(g, lo, hi);
    return x;
}

// Dense random network with uniform weights on [-1, 1].
inline Net random_net(Rng& g, int in, int out, int depth, int width,
                      nnquad::Activation act = nnquad::Activation::relu) {
    std::vector<nnquad::Layer<double>> layers;
    int prev = in;
    for (int l = 0; l < depth; ++l) {
        const int rows = l + 1 == depth ? out : width;
        layers.push_back({random_matrix(g, rows, prev), random_matrix(g, rows, 1).col(0)});
        prev = rows;
    }
    return Net(act, std::move(layers));
}

// Random CNF with n variables, 1..max_clauses distinct clauses of size <= k.
inline nnquad::Formula random_cnf(Rng& g, int n, int k, int max_clauses) {
    const auto space = nnquad::clause_space_size(n, k);
    const auto m = std::min<std::uint64_t>(static_cast<std::uint64_t>(uniform_int(g, 1, max_clauses)), space);
    return nnquad::random_formula(n, k, m, g());
}

// Assignment as a point of {0,1}^n.
inline Eigen::VectorXd corner(std::uint64_t bits, int n) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = static_cast<double>((bits >> i) & 1);
    return x;
}

// Integral of sigma(a.x - b) over [-1,1]^d by inclusion-exclusion over the
// vertices (every a_i nonzero).
inline double vertex_formula(const Eigen::VectorXd& a, double b) {
    const int d = static_cast<int>(a.size());
    double fact = 1, prod = 1;
    for (int i = 1; i <= d + 1; ++i) fact *= i;
    for (int i = 0; i < d; ++i) prod *= a(i);
    double sum = 0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << d); ++v) {
        double s = -b;
        int lower = 0;
        for (int i = 0; i < d; ++i) {
            const bool up = (v >> i) & 1;
            s += up ? a(i) : -a(i);
            lower += !up;
        }
        sum += (lower % 2 ? -1 : 1) * std::pow(std::max(s, 0.0), d + 1);
    }
    return sum / (fact * prod);
}

}  // namespace testing
