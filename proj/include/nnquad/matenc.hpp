#pragma once

#include <cstdint>
#include <vector>

#include "nnquad/cnf.hpp"
#include "nnquad/compile.hpp"

namespace nnquad {

// 2^d x 2^d matrix with entry (i, j) = net(b(i), b(j)).
struct EncodedMatrix {
    Net net;  // input dimension 2d
    int d;

    std::uint64_t size() const { return std::uint64_t{1} << d; }
};

// Bits of i, most significant first, as a d-vector of 0/1.
Eigen::VectorXd binary_rep(std::uint64_t i, int d);

EncodedMatrix make_encoded(Net net, int d);

// Formula over 2n variables: x_1..x_n read row bits 1..n and x_{n+1}..x_{2n}
// read column bits 1..n.  Requires n <= d.
EncodedMatrix encode_formula(const Formula& f, int d, double delta = 0.25);

double entry(const EncodedMatrix& M, std::uint64_t i, std::uint64_t j);
// Dense copy; d <= 12.
Eigen::MatrixXd materialize(const EncodedMatrix& M);
// M v by direct evaluation of every entry; d <= 12.
Eigen::VectorXd matvec(const EncodedMatrix& M, const Eigen::VectorXd& v);

// Largest singular value by power iteration on M^T M (relative tolerance,
// best of several random starts).
double spectral_norm(const Eigen::MatrixXd& M, double tol = 1e-8, int restarts = 3, std::uint64_t seed = 1);
double spectral_norm(const EncodedMatrix& M, double tol = 1e-8, int restarts = 3, std::uint64_t seed = 1);

// |M 1| / (||M|| |1|); 0 when M = 0.
double normalized_ratio(const EncodedMatrix& M);
// y = M 1 / (||M|| |1|); zero vector when M = 0.
Eigen::VectorXd normalized_image(const EncodedMatrix& M);

// (2^d / N) sum_j y_{i_j}^2 with i_j uniform: unbiased for |y|^2.
double mc_norm_estimate(const Eigen::VectorXd& y, std::uint64_t N, std::uint64_t seed);

}  // namespace nnquad
