#include "sysid/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "sysid/errors.hpp"

namespace sysid {

namespace {
constexpr double kRankTolerance = 1e-10;

// Solves min_M || responses - regressors M^T ||_F via SVD and returns M.
// Requires full column rank of the regressors at relative tolerance
// kRankTolerance.
Eigen::MatrixXd solve_least_squares(const RegressionDesign& design) {
    const Eigen::MatrixXd& R = design.regressors;
    if (R.rows() == 0 || R.cols() == 0) {
        throw std::invalid_argument("empty regression design");
    }

    Eigen::BDCSVD<Eigen::MatrixXd> solver(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("SVD of the regressor matrix did not converge");
    }
    const Eigen::VectorXd& s = solver.singularValues();
    const double cutoff = s(0) * kRankTolerance;
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) >= cutoff && s(rank) > 0.0) {
        ++rank;
    }
    if (rank < R.cols()) {
        throw IllPosedRegression(
            "regressor matrix is rank deficient (numerical rank " + std::to_string(rank) +
                " of " + std::to_string(R.cols()) + " columns)",
            rank);
    }
    // M^T = V S^{-1} U^T responses
    const Eigen::MatrixXd mt = solver.matrixV() * s.cwiseInverse().asDiagonal() *
                               (solver.matrixU().transpose() * design.responses);
    return mt.transpose();
}
}  // namespace

RegressionDesign build_single_design(const Trajectory& traj, Eigen::Index tau) {
    if (tau < 1) {
        throw std::invalid_argument("tau must be positive");
    }
    const Eigen::Index T = traj.length();
    const Eigen::Index d_u = traj.input_dim();
    const Eigen::Index d_y = traj.output_dim();
    if (traj.outputs.cols() != T) {
        throw std::invalid_argument("trajectory inputs and outputs must have equal length");
    }
    // Windows t = tau+1 .. T-tau+1 (1-based); T - 2 tau + 1 of them.
    const Eigen::Index rows = T - 2 * tau + 1;
    if (rows < 1) {
        throw std::invalid_argument("trajectory too short: need length >= 2 tau");
    }

    RegressionDesign design;
    design.kind = DesignKind::single_trajectory;
    design.tau = tau;
    design.d_u = d_u;
    design.d_y = d_y;
    design.regressors.resize(rows, tau * d_u);
    design.responses.resize(rows, tau * d_y);

    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = tau + r;  // 0-based index of y_t for t = tau+1 (1-based)
        for (Eigen::Index k = 0; k < tau; ++k) {
            // regressor block k is u_{t-1-k}; response block k is y_{t+k}
            design.regressors.row(r).segment(k * d_u, d_u) = traj.inputs.col(t - 1 - k);
            design.responses.row(r).segment(k * d_y, d_y) = traj.outputs.col(t + k);
        }
    }
    return design;
}

RegressionDesign build_multi_design(const std::vector<Trajectory>& trajectories,
                                    Eigen::Index tau) {
    if (tau < 1) {
        throw std::invalid_argument("tau must be positive");
    }
    if (trajectories.empty()) {
        throw std::invalid_argument("multi-trajectory design needs at least one trajectory");
    }
    const Eigen::Index d_u = trajectories.front().input_dim();
    const Eigen::Index d_y = trajectories.front().output_dim();

    RegressionDesign design;
    design.kind = DesignKind::multi_trajectory;
    design.tau = tau;
    design.d_u = d_u;
    design.d_y = d_y;
    design.regressors.resize(static_cast<Eigen::Index>(trajectories.size()), (2 * tau - 1) * d_u);
    design.responses.resize(static_cast<Eigen::Index>(trajectories.size()), d_y);

    Eigen::Index r = 0;
    for (const Trajectory& traj : trajectories) {
        if (traj.input_dim() != d_u || traj.output_dim() != d_y) {
            throw std::invalid_argument("trajectories must share input/output dimensions");
        }
        if (traj.length() < 2 * tau) {
            throw std::invalid_argument("each trajectory must have at least 2 tau steps");
        }
        // Reverse time order: block k holds u_{2 tau - 1 - k}.
        for (Eigen::Index k = 0; k < 2 * tau - 1; ++k) {
            design.regressors.row(r).segment(k * d_u, d_u) = traj.inputs.col(2 * tau - 2 - k);
        }
        design.responses.row(r) = traj.outputs.col(2 * tau - 1);
        ++r;
    }
    return design;
}

HankelMatrix lse_single(const RegressionDesign& design) {
    if (design.kind != DesignKind::single_trajectory) {
        throw std::invalid_argument("lse_single expects a single-trajectory design");
    }
    Eigen::MatrixXd estimate = solve_least_squares(design);
    return make_hankel_matrix(std::move(estimate), design.tau, design.d_u, design.d_y);
}

HankelMatrix lse_multi(const RegressionDesign& design) {
    if (design.kind != DesignKind::multi_trajectory) {
        throw std::invalid_argument("lse_multi expects a multi-trajectory design");
    }
    if (design.sample_count() < design.regressors.cols()) {
        throw IllPosedRegression(
            "multi-trajectory design needs at least (2 tau - 1) d_u rows",
            std::min(design.sample_count(), design.regressors.cols()));
    }
    Eigen::MatrixXd impulse_estimate = solve_least_squares(design);
    return hankel_from_impulse(
        make_impulse_block_row(std::move(impulse_estimate), design.tau, design.d_u, design.d_y));
}

namespace {
void validate_threshold_params(const ThresholdParams& p) {
    if (!(p.delta > 0.0 && p.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (p.T < 1) {
        throw std::invalid_argument("sample budget T must be positive");
    }
    if (p.tau < 1 || p.d_u < 1 || p.d_y < 1) {
        throw std::invalid_argument("tau, d_u, d_y must be positive");
    }
    if (p.sigma_u <= 0.0) {
        throw std::invalid_argument("sigma_u must be positive");
    }
    if (p.sigma_z < 0.0) {
        throw std::invalid_argument("sigma_z must be nonnegative");
    }
}

double log_inv(double delta) { return std::log(1.0 / delta); }
}  // namespace

double threshold_single(const ThresholdParams& p) {
    validate_threshold_params(p);
    if (!p.beta.has_value() || *p.beta < 0.0) {
        throw std::invalid_argument("single-trajectory threshold requires beta >= 0");
    }
    const double tau = static_cast<double>(p.tau);
    const double gain = std::max(*p.beta * std::sqrt(tau), p.sigma_z);
    const double dims = static_cast<double>(p.d_y) * tau + static_cast<double>(p.d_u) +
                        log_inv(p.delta);
    return 8.0 * gain / p.sigma_u * std::sqrt(dims / static_cast<double>(p.T));
}

double threshold_multi(const ThresholdParams& p) {
    validate_threshold_params(p);
    const double tau = static_cast<double>(p.tau);
    const double min_dim = static_cast<double>(std::min(p.d_y, p.tau));
    const double dims = tau * static_cast<double>(p.d_u) + log_inv(p.delta);
    return 4.0 * p.sigma_z / p.sigma_u *
           std::sqrt(tau * min_dim * dims / static_cast<double>(p.T));
}

SampleFloors sample_floors_single(const ThresholdParams& p, double s_n_hankel,
                                  double s_n_hankel_trimmed) {
    validate_threshold_params(p);
    if (!p.beta.has_value()) {
        throw std::invalid_argument("single-trajectory floors require beta");
    }
    if (s_n_hankel <= 0.0 || s_n_hankel_trimmed <= 0.0) {
        throw std::invalid_argument("singular values must be positive");
    }
    const double tau = static_cast<double>(p.tau);
    const double d_u = static_cast<double>(p.d_u);
    const double log_tau = std::log(tau);

    SampleFloors floors;
    floors.T0 = tau * log_tau * log_tau *
                (d_u * d_u * std::pow(std::log(d_u * d_u / p.delta), 2) + log_tau);
    const double gain2 = std::max(*p.beta * *p.beta * tau, p.sigma_z * p.sigma_z);
    const double dims = static_cast<double>(p.d_y) * tau + d_u + log_inv(p.delta);
    floors.T1 = gain2 / (p.sigma_u * p.sigma_u) * dims / (s_n_hankel * s_n_hankel);
    floors.T2 = gain2 / (p.sigma_u * p.sigma_u) * dims /
                (s_n_hankel_trimmed * s_n_hankel_trimmed);
    return floors;
}

SampleFloors sample_floors_multi(const ThresholdParams& p, double s_n_hankel,
                                 double s_n_hankel_trimmed) {
    validate_threshold_params(p);
    if (s_n_hankel <= 0.0 || s_n_hankel_trimmed <= 0.0) {
        throw std::invalid_argument("singular values must be positive");
    }
    const double tau = static_cast<double>(p.tau);
    const double d_u = static_cast<double>(p.d_u);
    const double min_dim = static_cast<double>(std::min(p.d_y, p.tau));
    const double dims = tau * d_u + log_inv(p.delta);

    SampleFloors floors;
    floors.T0 = tau * (log_inv(p.delta) + (2.0 * tau - 1.0) * d_u);
    const double noise2 = p.sigma_z * p.sigma_z / (p.sigma_u * p.sigma_u);
    floors.T1 = noise2 * tau * min_dim * dims / (s_n_hankel * s_n_hankel);
    floors.T2 = noise2 * tau * min_dim * dims / (s_n_hankel_trimmed * s_n_hankel_trimmed);
    return floors;
}

}  // namespace sysid
