#include "sysid/hokalman.hpp"

#include <stdexcept>

#include <Eigen/Dense>

#include "sysid/lowrank.hpp"

namespace sysid {

namespace {
// Factorization core shared by both entry points: compact SVD of the
// matrix without its last block column, truncated at `rank` triplets.
Realization factor_at_rank(const Eigen::MatrixXd& data, Eigen::Index rank,
                           Eigen::Index d_u, Eigen::Index d_y) {
    const Eigen::MatrixXd trimmed_right = drop_last_block_column(data, d_u);
    const Eigen::MatrixXd trimmed_left = drop_first_block_column(data, d_u);
    const SvdFactorization f = svd(trimmed_right);

    Realization r;
    if (rank == 0) {
        r.A.resize(0, 0);
        r.B.resize(0, d_u);
        r.C.resize(d_y, 0);
        return r;
    }

    const Eigen::VectorXd root_s = f.singular_values.head(rank).cwiseSqrt();
    const Eigen::MatrixXd observability = f.left_vectors.leftCols(rank) * root_s.asDiagonal();
    const Eigen::MatrixXd controllability =
        root_s.asDiagonal() * f.right_vectors.leftCols(rank).transpose();

    // Orthonormal columns make the pseudoinverses explicit:
    // O^+ = S^{-1/2} U^T and Q^+ = V S^{-1/2}.
    const Eigen::VectorXd inv_root_s = root_s.cwiseInverse();
    r.A = inv_root_s.asDiagonal() * (f.left_vectors.leftCols(rank).transpose() * trimmed_left *
                                     f.right_vectors.leftCols(rank)) *
          inv_root_s.asDiagonal();
    r.B = controllability.leftCols(d_u);
    r.C = observability.topRows(d_y);
    return r;
}

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values) {
    if (singular_values.size() == 0 || singular_values(0) <= 0.0) {
        return 0;
    }
    const double cutoff = kSingularValueFloor * singular_values(0);
    Eigen::Index rank = 0;
    while (rank < singular_values.size() && singular_values(rank) > cutoff) {
        ++rank;
    }
    return rank;
}
}  // namespace

Realization ho_kalman(const HankelMatrix& h, Eigen::Index rank) {
    if (h.tau < 2) {
        throw std::invalid_argument("ho_kalman requires tau >= 2");
    }
    if (rank < 1) {
        throw std::invalid_argument("ho_kalman requires rank >= 1");
    }
    const Eigen::MatrixXd trimmed = drop_last_block_column(h);
    const SvdFactorization f = svd(trimmed);
    if (rank > numerical_rank(f.singular_values)) {
        throw std::invalid_argument("requested rank exceeds the numerical rank of the trimmed Hankel");
    }
    return factor_at_rank(h.data, rank, h.d_u, h.d_y);
}

IdentificationResult thresholded_ho_kalman(const HankelMatrix& h_hat, double xi) {
    if (h_hat.tau < 2) {
        throw std::invalid_argument("thresholded_ho_kalman requires tau >= 2");
    }
    if (xi < 0.0) {
        throw std::invalid_argument("threshold must be nonnegative");
    }

    const ThresholdedMatrix thresholded = hard_threshold(h_hat.data, xi);

    IdentificationResult result;
    result.order = thresholded.effective_rank;
    result.threshold = xi;
    result.retained_singular_values =
        svd(h_hat.data).singular_values.head(thresholded.effective_rank);

    // The trimmed thresholded matrix can have smaller rank than the order
    // estimate; truncating at its own numerical rank keeps the
    // pseudoinverses bounded.
    const Eigen::MatrixXd trimmed = drop_last_block_column(thresholded.matrix, h_hat.d_u);
    const Eigen::Index rank =
        std::min(result.order, numerical_rank(svd(trimmed).singular_values));
    result.realization_rank = rank;

    const Realization realization = factor_at_rank(thresholded.matrix, rank, h_hat.d_u, h_hat.d_y);
    result.A_hat = realization.A;
    result.B_hat = realization.B;
    result.C_hat = realization.C;
    return result;
}

}  // namespace sysid
