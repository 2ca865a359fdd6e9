#pragma once

#include <Eigen/Core>

#include "sysid/state_space.hpp"

namespace sysid {

/// tau x tau block matrix whose (i, j) block is the Markov parameter
/// C A^{i+j-2} B when built from a true system. Estimates produced by the
/// least-squares paths reuse the type for its block-structure metadata and
/// need not be Hankel-structured.
struct HankelMatrix {
    Eigen::MatrixXd data;  // (tau * d_y) x (tau * d_u)
    Eigen::Index tau = 0;
    Eigen::Index d_u = 0;
    Eigen::Index d_y = 0;
};

/// Truncated impulse response (C B, C A B, ..., C A^{2 tau - 2} B) laid out
/// as a d_y x (2 tau - 1) d_u block row.
struct ImpulseBlockRow {
    Eigen::MatrixXd data;
    Eigen::Index tau = 0;
    Eigen::Index d_u = 0;
    Eigen::Index d_y = 0;
};

/// Wraps raw data as an ImpulseBlockRow, checking the block count
/// (columns must equal (2 tau - 1) d_u).
ImpulseBlockRow make_impulse_block_row(Eigen::MatrixXd data, Eigen::Index tau,
                                       Eigen::Index d_u, Eigen::Index d_y);

/// Wraps raw data as a HankelMatrix, checking dimensions.
HankelMatrix make_hankel_matrix(Eigen::MatrixXd data, Eigen::Index tau,
                                Eigen::Index d_u, Eigen::Index d_y);

/// Impulse response of the system truncated at 2 tau - 1 terms.
ImpulseBlockRow impulse_block_row(const StateSpaceSystem& system, Eigen::Index tau);

/// The linear map sending the block row (G_1 ... G_{2 tau - 1}) to the
/// block-Hankel matrix with (i, j) block G_{i+j-1}.
HankelMatrix hankel_from_impulse(const ImpulseBlockRow& g);

/// Hankel matrix of the system, equal to hankel_from_impulse of its
/// truncated impulse response. Has rank equal to the system order whenever
/// tau >= n + 1.
HankelMatrix true_hankel(const StateSpaceSystem& system, Eigen::Index tau);

/// Copy of h without its last / first block column (tau >= 2). These are the
/// two shifted submatrices consumed by the Ho-Kalman factorization.
Eigen::MatrixXd drop_last_block_column(const HankelMatrix& h);
Eigen::MatrixXd drop_first_block_column(const HankelMatrix& h);

/// Same block-column slices for a raw matrix with block width d_u.
Eigen::MatrixXd drop_last_block_column(const Eigen::MatrixXd& data, Eigen::Index d_u);
Eigen::MatrixXd drop_first_block_column(const Eigen::MatrixXd& data, Eigen::Index d_u);

/// General block-Hankel matrix with (i, j) block C A^{t+i+j-2} B for
/// i = 1..tau1, j = 1..tau2. tau2 = 0 yields an empty matrix with
/// tau1 * d_y rows, which keeps the stacked input-output identity valid at
/// its boundary index.
Eigen::MatrixXd block_hankel(const StateSpaceSystem& system, Eigen::Index t,
                             Eigen::Index tau1, Eigen::Index tau2);

/// Strictly lower block-triangular Toeplitz matrix with (i, j) block
/// C A^{t+i-j-1} B for i > j and zero otherwise.
Eigen::MatrixXd block_toeplitz(const StateSpaceSystem& system, Eigen::Index t,
                               Eigen::Index tau);

}  // namespace sysid
