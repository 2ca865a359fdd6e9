#pragma once

#include <Eigen/Core>

#include "sysid/random.hpp"

namespace sysid {

/// Discrete-time LTI system x_{t+1} = A x_t + B u_t, y_t = C x_t + z_t.
/// Dimensions are carried by the matrices: A is n x n, B is n x d_u,
/// C is d_y x n.
struct StateSpaceSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;

    Eigen::Index state_dim() const { return A.rows(); }
    Eigen::Index input_dim() const { return B.cols(); }
    Eigen::Index output_dim() const { return C.rows(); }
};

/// Throws std::invalid_argument unless A is square, B has A.rows() rows and
/// C has A.rows() columns.
void validate(const StateSpaceSystem& system);

/// Standard deviations of the i.i.d. Gaussian inputs and observation noise.
/// sigma_z = 0 gives noiseless outputs.
struct NoiseSpec {
    double sigma_u = 1.0;
    double sigma_z = 0.0;
};

/// One input-output run. Column t (0-based) holds u_{t+1} / y_{t+1}, so the
/// time index convention matches the 1-based recursion with x_1 = 0.
struct Trajectory {
    Eigen::MatrixXd inputs;   // d_u x T
    Eigen::MatrixXd outputs;  // d_y x T

    Eigen::Index length() const { return inputs.cols(); }
    Eigen::Index input_dim() const { return inputs.rows(); }
    Eigen::Index output_dim() const { return outputs.rows(); }
};

/// Noiseless output sequence for a given input sequence (d_u x T), starting
/// from x_1 = 0. Linear in the inputs.
Eigen::MatrixXd simulate_response(const StateSpaceSystem& system, const Eigen::MatrixXd& inputs);

/// Simulates one trajectory of the given length with u_t ~ N(0, sigma_u^2 I)
/// and z_t ~ N(0, sigma_z^2 I). Input and noise samples come from
/// independent substreams of the seed, so changing sigma_z leaves the input
/// sample path untouched.
Trajectory simulate_trajectory(const StateSpaceSystem& system, const NoiseSpec& noise,
                               Eigen::Index length, RandomSeed seed);

/// Markov parameter C A^k B, computed by k repeated multiplications with A.
Eigen::MatrixXd markov_parameter(const StateSpaceSystem& system, Eigen::Index k);

/// Largest eigenvalue modulus of A via a dense eigensolver.
double spectral_radius(const StateSpaceSystem& system);

/// Grid approximation of the H-infinity norm: the maximum over grid_size
/// frequencies w, uniformly spaced on [0, pi], of the largest singular value
/// of C (e^{iw} I - A)^{-1} B. A lower bound of the true norm that tightens
/// as the grid is refined (refined grids keep the coarser grid points when
/// grid_size - 1 doubles). Requires spectral_radius < 1.
double hinf_norm(const StateSpaceSystem& system, Eigen::Index grid_size = 4096);

/// Random stable system: A diagonal with i.i.d. Uniform(0.1, 0.9) entries,
/// B and C with i.i.d. N(0, 2^2) entries.
StateSpaceSystem random_system(Eigen::Index n, Eigen::Index d_u, Eigen::Index d_y,
                               RandomSeed seed);

}  // namespace sysid
