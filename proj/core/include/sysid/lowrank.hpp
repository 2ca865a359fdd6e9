#pragma once

#include <Eigen/Core>

namespace sysid {

/// Thin SVD with singular values in nonincreasing order. Signs follow a
/// fixed convention (first nonzero entry of each left singular vector is
/// nonnegative) so factorizations are reproducible across runs.
struct SvdFactorization {
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd left_vectors;   // column-orthonormal
    Eigen::MatrixXd right_vectors;  // column-orthonormal

    /// Sum of the retained triplets s_i u_i v_i^T for i < count.
    Eigen::MatrixXd reconstruct(Eigen::Index count) const;
};

SvdFactorization svd(const Eigen::MatrixXd& m);

/// Best rank-k approximation (Eckart-Young): the squared Frobenius residual
/// equals the sum of the squared discarded singular values.
Eigen::MatrixXd rank_k_approx(const Eigen::MatrixXd& m, Eigen::Index k);

/// Matrix after hard singular value thresholding, with its effective rank.
struct ThresholdedMatrix {
    Eigen::MatrixXd matrix;
    Eigen::Index effective_rank = 0;
    double threshold = 0.0;
};

/// Relative floor below which singular values count as numerical zeros.
inline constexpr double kSingularValueFloor = 1e-12;

/// Keeps the singular triplets with s_i >= xi (ties retained) and zeroes the
/// rest. Singular values below kSingularValueFloor * s_1 are treated as
/// numerical zeros and never retained, so the effective rank at xi = 0 is
/// the numerical rank rather than min(rows, cols).
ThresholdedMatrix hard_threshold(const Eigen::MatrixXd& m, double xi);

/// Moore-Penrose pseudoinverse via SVD; inverts singular values strictly
/// above rel_tol * s_1 and zeroes the rest.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

}  // namespace sysid
