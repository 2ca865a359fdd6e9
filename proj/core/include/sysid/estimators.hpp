#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sysid/hankel.hpp"
#include "sysid/state_space.hpp"

namespace sysid {

enum class DesignKind {
    single_trajectory,  // rows indexed by time within one run
    multi_trajectory,   // one row per independent run
};

/// Stacked least-squares problem: one response/regressor pair per row.
/// Carries the block dimensions used to build it so the estimators can tag
/// their outputs.
struct RegressionDesign {
    Eigen::MatrixXd responses;   // sample_count x response_dim
    Eigen::MatrixXd regressors;  // sample_count x regressor_dim
    DesignKind kind = DesignKind::single_trajectory;
    Eigen::Index tau = 0;
    Eigen::Index d_u = 0;
    Eigen::Index d_y = 0;

    Eigen::Index sample_count() const { return responses.rows(); }
};

/// Builds the single-trajectory design with one row per window position
/// t = tau+1 .. T-tau+1: regressor (u_{t-1}, ..., u_{t-tau}), response
/// (y_t, ..., y_{t+tau-1}). Requires T >= 2 tau so at least one window fits.
RegressionDesign build_single_design(const Trajectory& traj, Eigen::Index tau);

/// Builds the multi-trajectory design with one row per run: regressor
/// (u_{2tau-1}, ..., u_1) in reverse time order, response y_{2tau}. Each run
/// must have at least 2 tau steps and start from x_1 = 0.
RegressionDesign build_multi_design(const std::vector<Trajectory>& trajectories,
                                    Eigen::Index tau);

/// Unconstrained least-squares estimate of the tau d_y x tau d_u matrix
/// mapping stacked past inputs to stacked outputs. No Hankel structure is
/// enforced. Throws IllPosedRegression when the regressors are column-rank
/// deficient at relative tolerance 1e-10.
HankelMatrix lse_single(const RegressionDesign& design);

/// Least-squares estimate of the truncated impulse response followed by the
/// impulse-to-Hankel map. Requires at least (2 tau - 1) d_u rows of full
/// column rank.
HankelMatrix lse_multi(const RegressionDesign& design);

/// Inputs of the closed-form thresholds and sample-size floors. beta (an
/// upper bound on the H-infinity norm) is only consulted in single-
/// trajectory mode.
struct ThresholdParams {
    double sigma_u = 1.0;
    double sigma_z = 0.0;
    Eigen::Index tau = 0;
    Eigen::Index d_u = 0;
    Eigen::Index d_y = 0;
    double delta = 0.05;
    long long T = 1;  // total sample budget
    std::optional<double> beta;
};

/// Single-trajectory threshold
///   xi = 8 max(beta sqrt(tau), sigma_z) / sigma_u
///        * sqrt((d_y tau + d_u + log(1/delta)) / T).
double threshold_single(const ThresholdParams& p);

/// Multi-trajectory threshold
///   xi = 4 sigma_z / sigma_u
///        * sqrt(tau min(d_y, tau) (tau d_u + log(1/delta)) / T).
double threshold_multi(const ThresholdParams& p);

/// Diagnostic sample-size floors (reported without the universal constants
/// hidden in the theory's "greater than, up to constants"). T0 gates the
/// Hankel error bound, T1 order recovery, T2 parameter recovery; T2 >= T1
/// always since s_n of the trimmed Hankel cannot exceed s_n of the full one.
struct SampleFloors {
    double T0 = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
};

SampleFloors sample_floors_single(const ThresholdParams& p, double s_n_hankel,
                                  double s_n_hankel_trimmed);
SampleFloors sample_floors_multi(const ThresholdParams& p, double s_n_hankel,
                                 double s_n_hankel_trimmed);

}  // namespace sysid
