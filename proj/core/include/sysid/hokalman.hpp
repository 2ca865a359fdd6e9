#pragma once

#include <Eigen/Core>

#include "sysid/hankel.hpp"

namespace sysid {

/// State-space realization recovered from a Hankel matrix, valid up to an
/// invertible change of state basis.
struct Realization {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
};

/// Classical Ho-Kalman factorization at a prescribed rank: compact SVD
/// U S V^T of the Hankel matrix without its last block column, observability
/// and controllability factors O = U S^{1/2}, Q = S^{1/2} V^T, and
/// A = O^+ H_shifted Q^+, B = first d_u columns of Q, C = first d_y rows
/// of O. Applied to an exact system Hankel at rank n this recovers the true
/// parameters up to similarity. Requires tau >= 2 and rank at most the
/// numerical rank of the trimmed matrix.
Realization ho_kalman(const HankelMatrix& h, Eigen::Index rank);

/// Output of the thresholded identification step.
struct IdentificationResult {
    Eigen::Index order = 0;  // effective rank of the thresholded estimate
    Eigen::MatrixXd A_hat;   // r x r with r <= order (see realization_rank)
    Eigen::MatrixXd B_hat;   // r x d_u
    Eigen::MatrixXd C_hat;   // d_y x r
    double threshold = 0.0;
    Eigen::VectorXd retained_singular_values;  // descending, length = order
    /// Rank actually used for the factorization; equals order except when
    /// the trimmed thresholded matrix loses rank (near-zero submatrix).
    Eigen::Index realization_rank = 0;
};

/// Thresholded Ho-Kalman: hard-thresholds the estimate at xi, reports the
/// effective rank as the order estimate and factors the trimmed thresholded
/// matrix (compact SVD at relative tolerance 1e-12) into a realization.
/// Order zero yields empty matrices.
IdentificationResult thresholded_ho_kalman(const HankelMatrix& h_hat, double xi);

}  // namespace sysid
