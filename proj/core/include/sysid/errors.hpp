#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sysid {

/// Raised when a linear-algebra routine fails to converge or produces
/// non-finite values. Distinct from std::invalid_argument so callers can
/// map precondition violations and numerical breakdowns to different
/// exit codes.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by the least-squares estimators when the regressor matrix is
/// rank deficient. Carries the numerical rank that was actually observed.
struct IllPosedRegression : NumericalError {
    IllPosedRegression(const std::string& what, Eigen::Index rank)
        : NumericalError(what), numerical_rank(rank) {}

    Eigen::Index numerical_rank;
};

}  // namespace sysid
