#include "sysid/lowrank.hpp"

#include <stdexcept>

#include <Eigen/Dense>

#include "sysid/errors.hpp"

namespace sysid {

Eigen::MatrixXd SvdFactorization::reconstruct(Eigen::Index count) const {
    if (count < 0 || count > singular_values.size()) {
        throw std::invalid_argument("reconstruction count out of range");
    }
    if (count == 0) {
        return Eigen::MatrixXd::Zero(left_vectors.rows(), right_vectors.rows());
    }
    return left_vectors.leftCols(count) * singular_values.head(count).asDiagonal() *
           right_vectors.leftCols(count).transpose();
}

SvdFactorization svd(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("svd requires finite entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("SVD did not converge");
    }

    SvdFactorization f;
    f.singular_values = solver.singularValues();
    f.left_vectors = solver.matrixU();
    f.right_vectors = solver.matrixV();

    // Sign convention: first nonzero entry of each left singular vector
    // is nonnegative.
    for (Eigen::Index i = 0; i < f.left_vectors.cols(); ++i) {
        for (Eigen::Index r = 0; r < f.left_vectors.rows(); ++r) {
            const double entry = f.left_vectors(r, i);
            if (entry != 0.0) {
                if (entry < 0.0) {
                    f.left_vectors.col(i) = -f.left_vectors.col(i);
                    f.right_vectors.col(i) = -f.right_vectors.col(i);
                }
                break;
            }
        }
    }
    return f;
}

Eigen::MatrixXd rank_k_approx(const Eigen::MatrixXd& m, Eigen::Index k) {
    const Eigen::Index max_rank = std::min(m.rows(), m.cols());
    if (k < 0 || k > max_rank) {
        throw std::invalid_argument("rank_k_approx requires 0 <= k <= min(rows, cols)");
    }
    return svd(m).reconstruct(k);
}

ThresholdedMatrix hard_threshold(const Eigen::MatrixXd& m, double xi) {
    if (xi < 0.0) {
        throw std::invalid_argument("threshold must be nonnegative");
    }
    const SvdFactorization f = svd(m);
    const double floor =
        f.singular_values.size() > 0 ? kSingularValueFloor * f.singular_values(0) : 0.0;

    Eigen::Index retained = 0;
    while (retained < f.singular_values.size() && f.singular_values(retained) >= xi &&
           f.singular_values(retained) > floor) {
        ++retained;
    }

    ThresholdedMatrix out;
    out.threshold = xi;
    out.effective_rank = retained;
    out.matrix = f.reconstruct(retained);
    return out;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol) {
    if (rel_tol < 0.0) {
        throw std::invalid_argument("rel_tol must be nonnegative");
    }
    const SvdFactorization f = svd(m);
    const double cutoff = f.singular_values.size() > 0 ? rel_tol * f.singular_values(0) : 0.0;

    Eigen::VectorXd inverted = Eigen::VectorXd::Zero(f.singular_values.size());
    for (Eigen::Index i = 0; i < f.singular_values.size(); ++i) {
        if (f.singular_values(i) > cutoff && f.singular_values(i) > 0.0) {
            inverted(i) = 1.0 / f.singular_values(i);
        }
    }
    return f.right_vectors * inverted.asDiagonal() * f.left_vectors.transpose();
}

}  // namespace sysid
