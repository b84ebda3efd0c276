#include "nnquad/matenc.hpp"

#include <cmath>
#include <random>

namespace nnquad {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void check_dense(int d) {
    if (d < 1 || d > 12) throw BudgetError("dense matrix operations limited to 1 <= d <= 12");
}

// Inputs (b(i), b(j)) for all j in [j0, j0 + count).
MatrixXd row_inputs(std::uint64_t i, std::uint64_t j0, std::uint64_t count, int d) {
    MatrixXd X(2 * d, static_cast<Eigen::Index>(count));
    const VectorXd bi = binary_rep(i, d);
    for (std::uint64_t c = 0; c < count; ++c) {
        X.col(static_cast<Eigen::Index>(c)).head(d) = bi;
        X.col(static_cast<Eigen::Index>(c)).tail(d) = binary_rep(j0 + c, d);
    }
    return X;
}

}  // namespace

VectorXd binary_rep(std::uint64_t i, int d) {
    if (d < 1 || d > 62 || i >> d) throw InputError("binary_rep: index out of range");
    VectorXd b(d);
    for (int k = 0; k < d; ++k) b(k) = static_cast<double>(i >> (d - 1 - k) & 1u);
    return b;
}

EncodedMatrix make_encoded(Net net, int d) {
    if (net.input_dim() != 2 * d || net.output_dim() != 1)
        throw InputError("encoded matrix needs a network R^{2d} -> R");
    return {std::move(net), d};
}

EncodedMatrix encode_formula(const Formula& f, int d, double delta) {
    const int n = (f.num_vars() + 1) / 2;
    if (n > d) throw InputError("encode_formula: formula needs n = " + std::to_string(n) + " > d = " + std::to_string(d));
    const Net phi = compile_cnf(f, build_r_relu(delta), 1.0, 2 * n);
    MatrixXd S = MatrixXd::Zero(2 * n, 2 * d);
    for (int k = 0; k < n; ++k) {
        S(k, k) = 1;
        S(n + k, d + k) = 1;
    }
    return make_encoded(compose(phi, affine_network<double>(S, VectorXd::Zero(2 * n))), d);
}

double entry(const EncodedMatrix& M, std::uint64_t i, std::uint64_t j) {
    if (i >= M.size() || j >= M.size()) throw InputError("entry index out of range");
    VectorXd x(2 * M.d);
    x << binary_rep(i, M.d), binary_rep(j, M.d);
    return evaluate1(M.net, x);
}

MatrixXd materialize(const EncodedMatrix& M) {
    check_dense(M.d);
    const auto N = M.size();
    MatrixXd out(N, N);
    for (std::uint64_t i = 0; i < N; ++i)
        out.row(static_cast<Eigen::Index>(i)) = evaluate(M.net, row_inputs(i, 0, N, M.d));
    return out;
}

VectorXd matvec(const EncodedMatrix& M, const VectorXd& v) {
    check_dense(M.d);
    const auto N = M.size();
    if (static_cast<std::uint64_t>(v.size()) != N) throw InputError("matvec: vector length != 2^d");
    VectorXd y(N);
    for (std::uint64_t i = 0; i < N; ++i)
        y(static_cast<Eigen::Index>(i)) = (evaluate(M.net, row_inputs(i, 0, N, M.d)) * v)(0);
    return y;
}

double spectral_norm(const MatrixXd& M, double tol, int restarts, std::uint64_t seed) {
    if (M.size() == 0 || M.isZero(0)) return 0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0, 1);
    double best = 0;
    for (int r = 0; r < restarts; ++r) {
        VectorXd v(M.cols());
        for (auto& x : v) x = N(rng);
        v.normalize();
        double lambda = 0;
        bool converged = false;
        for (int it = 0; it < 100000; ++it) {
            VectorXd w = M.transpose() * (M * v);
            const double nw = w.norm();
            if (nw == 0) break;  // start orthogonal to the row space
            const double next = std::sqrt(nw);  // ||M^T M v||^(1/2) for unit v
            v = w / nw;
            if (std::abs(next - lambda) <= tol * next) {
                lambda = next;
                converged = true;
                break;
            }
            lambda = next;
        }
        if (!converged && lambda > 0) throw ConvergenceError("power iteration did not converge");
        best = std::max(best, (M * v).norm());
    }
    return best;
}

double spectral_norm(const EncodedMatrix& M, double tol, int restarts, std::uint64_t seed) {
    return spectral_norm(materialize(M), tol, restarts, seed);
}

VectorXd normalized_image(const EncodedMatrix& M) {
    const MatrixXd A = materialize(M);
    const double s = spectral_norm(A);
    if (s == 0) return VectorXd::Zero(A.rows());
    return A.rowwise().sum() / (s * std::sqrt(static_cast<double>(A.cols())));
}

double normalized_ratio(const EncodedMatrix& M) { return normalized_image(M).norm(); }

double mc_norm_estimate(const VectorXd& y, std::uint64_t N, std::uint64_t seed) {
    if (N < 1 || y.size() == 0) throw InputError("mc_norm_estimate needs N >= 1 and a non-empty vector");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> U(0, y.size() - 1);
    double s = 0;
    for (std::uint64_t k = 0; k < N; ++k) {
        const double v = y(U(rng));
        s += v * v;
    }
    return static_cast<double>(y.size()) * s / static_cast<double>(N);
}

}  // namespace nnquad
