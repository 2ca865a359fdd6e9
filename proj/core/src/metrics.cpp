#include "sysid/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "sysid/lowrank.hpp"

namespace sysid {

namespace {
void check_shapes(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2) {
    if (m1.rows() != m2.rows() || m1.cols() != m2.cols()) {
        throw std::invalid_argument("error norms require matrices of equal shape");
    }
}
}  // namespace

double frobenius_error(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2) {
    check_shapes(m1, m2);
    return (m1 - m2).norm();
}

double operator_error(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2) {
    check_shapes(m1, m2);
    if (m1.size() == 0) {
        return 0.0;
    }
    return (m1 - m2).jacobiSvd().singularValues()(0);
}

std::vector<double> markov_error(const IdentificationResult& result,
                                 const StateSpaceSystem& system, Eigen::Index horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be positive");
    }
    const Eigen::Index d_u = system.input_dim();
    const Eigen::Index d_y = system.output_dim();
    if (result.B_hat.cols() != d_u || result.C_hat.rows() != d_y) {
        throw std::invalid_argument("identification result does not match the system dimensions");
    }

    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(horizon));

    Eigen::MatrixXd truth_state = system.B;         // A^k B
    Eigen::MatrixXd estimate_state = result.B_hat;  // A_hat^k B_hat
    for (Eigen::Index k = 0; k < horizon; ++k) {
        // An empty realization gives a (d_y x 0) (0 x d_u) product: zero.
        const Eigen::MatrixXd estimated = result.C_hat * estimate_state;
        errors.push_back((estimated - system.C * truth_state).norm());
        truth_state = system.A * truth_state;
        if (estimate_state.rows() > 0) {
            estimate_state = result.A_hat * estimate_state;
        }
    }
    return errors;
}

double prop1_bound(const Eigen::VectorXd& singular_values, Eigen::Index n, double xi) {
    if (n < 0 || n > singular_values.size()) {
        throw std::invalid_argument("n must lie in [0, number of singular values]");
    }
    if (xi < 0.0) {
        throw std::invalid_argument("xi must be nonnegative");
    }
    // tail_k = sum_{i=k+1}^{n} s_i^2, accumulated backwards while taking the min.
    double best = std::numeric_limits<double>::infinity();
    double tail = 0.0;
    for (Eigen::Index k = n; k >= 0; --k) {
        best = std::min(best, 4.0 * static_cast<double>(k) * xi * xi + tail);
        if (k > 0) {
            tail += singular_values(k - 1) * singular_values(k - 1);
        }
    }
    return 18.0 * best;
}

TheoremBounds thm_param_bounds(const HankelMatrix& h, double fro_err) {
    if (h.tau < 2) {
        throw std::invalid_argument("thm_param_bounds requires tau >= 2");
    }
    if (fro_err < 0.0) {
        throw std::invalid_argument("fro_err must be nonnegative");
    }
    const SvdFactorization full = svd(h.data);
    if (full.singular_values.size() == 0 || full.singular_values(0) <= 0.0) {
        throw std::invalid_argument("thm_param_bounds requires a nonzero Hankel matrix");
    }
    const double cutoff = 1e-8 * full.singular_values(0);
    Eigen::Index n = 0;
    while (n < full.singular_values.size() && full.singular_values(n) >= cutoff) {
        ++n;
    }

    const Eigen::VectorXd trimmed_s = svd(drop_last_block_column(h)).singular_values;
    if (n > trimmed_s.size() || trimmed_s(n - 1) <= 0.0) {
        throw std::invalid_argument("trimmed Hankel loses rank; bounds undefined");
    }
    const double s_n_trimmed = trimmed_s(n - 1);

    TheoremBounds bounds;
    bounds.a_bound = 50.0 * full.singular_values(0) * fro_err / (s_n_trimmed * s_n_trimmed);
    bounds.bc_bound = std::sqrt(5.0) * fro_err / std::sqrt(s_n_trimmed);
    return bounds;
}

}  // namespace sysid
