#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "sysid/hankel.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/state_space.hpp"

namespace sysid {

/// Frobenius norm of M1 - M2.
double frobenius_error(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2);

/// Operator (spectral) norm of M1 - M2.
double operator_error(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2);

/// Frobenius errors of the identified Markov parameters at lags
/// k = 0 .. horizon-1. An empty realization contributes zero, so entry k
/// degrades to the norm of the true parameter.
std::vector<double> markov_error(const IdentificationResult& result,
                                 const StateSpaceSystem& system, Eigen::Index horizon);

/// Right-hand side of the rank-adaptive denoising bound:
/// 18 min_{k=0..n} (4 k xi^2 + sum_{i>k} s_i^2).
double prop1_bound(const Eigen::VectorXd& singular_values, Eigen::Index n, double xi);

/// Right-hand sides of the parameter error bounds, evaluated with the true
/// Hankel matrix. Diagnostics only; the estimators never touch these.
struct TheoremBounds {
    double a_bound = 0.0;   // 50 ||H||_2 fro_err / s_n(H_trimmed)^2
    double bc_bound = 0.0;  // sqrt(5) fro_err / sqrt(s_n(H_trimmed))
};

TheoremBounds thm_param_bounds(const HankelMatrix& h, double fro_err);

/// One Monte-Carlo trial observation. status is "ok" or "failed:<reason>";
/// failed trials carry NaN in the error fields.
struct TrialRecord {
    std::string status = "ok";
    long long T = 0;
    int trial_index = 0;
    double xi = 0.0;
    Eigen::Index order_estimate = 0;
    double hankel_op_error = 0.0;
    double hankel_fro_error_thresholded = 0.0;
    double markov_cab_error = 0.0;
    double oracle_cab_error = 0.0;
    double bound_rhs_prop1 = 0.0;
};

}  // namespace sysid
