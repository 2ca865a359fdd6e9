#include "sysid/state_space.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sysid/errors.hpp"

namespace sysid {

namespace {
// Stream tags for the two independent sample paths of one trajectory.
constexpr std::uint64_t kInputStream = 0x75;  // 'u'
constexpr std::uint64_t kNoiseStream = 0x7A;  // 'z'

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double stddev,
                                std::mt19937_64& engine) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = stddev * normal(engine);
        }
    }
    return m;
}
}  // namespace

void validate(const StateSpaceSystem& system) {
    if (system.A.rows() == 0 || system.B.cols() == 0 || system.C.rows() == 0) {
        throw std::invalid_argument("state-space system has an empty dimension");
    }
    if (system.A.rows() != system.A.cols()) {
        throw std::invalid_argument("A must be square");
    }
    if (system.B.rows() != system.A.rows()) {
        throw std::invalid_argument("B must have as many rows as A");
    }
    if (system.C.cols() != system.A.rows()) {
        throw std::invalid_argument("C must have as many columns as A");
    }
}

Eigen::MatrixXd simulate_response(const StateSpaceSystem& system, const Eigen::MatrixXd& inputs) {
    validate(system);
    if (inputs.rows() != system.input_dim()) {
        throw std::invalid_argument("input rows do not match the system input dimension");
    }
    const Eigen::Index T = inputs.cols();
    Eigen::MatrixXd outputs(system.output_dim(), T);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(system.state_dim());  // x_1 = 0
    for (Eigen::Index t = 0; t < T; ++t) {
        outputs.col(t) = system.C * x;
        x = system.A * x + system.B * inputs.col(t);
    }
    return outputs;
}

Trajectory simulate_trajectory(const StateSpaceSystem& system, const NoiseSpec& noise,
                               Eigen::Index length, RandomSeed seed) {
    validate(system);
    if (length < 1) {
        throw std::invalid_argument("trajectory length must be at least 1");
    }
    if (noise.sigma_u < 0.0 || noise.sigma_z < 0.0) {
        throw std::invalid_argument("noise standard deviations must be nonnegative");
    }

    auto input_engine = make_engine(derive_seed(seed, kInputStream));
    auto noise_engine = make_engine(derive_seed(seed, kNoiseStream));

    Trajectory traj;
    traj.inputs = gaussian_matrix(system.input_dim(), length, noise.sigma_u, input_engine);
    traj.outputs = simulate_response(system, traj.inputs);
    if (noise.sigma_z > 0.0) {
        traj.outputs += gaussian_matrix(system.output_dim(), length, noise.sigma_z, noise_engine);
    }
    return traj;
}

Eigen::MatrixXd markov_parameter(const StateSpaceSystem& system, Eigen::Index k) {
    validate(system);
    if (k < 0) {
        throw std::invalid_argument("markov_parameter requires k >= 0");
    }
    Eigen::MatrixXd m = system.B;
    for (Eigen::Index i = 0; i < k; ++i) {
        m = system.A * m;
    }
    return system.C * m;
}

double spectral_radius(const StateSpaceSystem& system) {
    validate(system);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(system.A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue solver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double hinf_norm(const StateSpaceSystem& system, Eigen::Index grid_size) {
    validate(system);
    if (grid_size < 1) {
        throw std::invalid_argument("grid_size must be positive");
    }
    if (spectral_radius(system) >= 1.0) {
        throw std::invalid_argument("hinf_norm requires a stable system (spectral radius < 1)");
    }

    const Eigen::Index n = system.state_dim();
    const Eigen::MatrixXcd A = system.A.cast<std::complex<double>>();
    const Eigen::MatrixXcd B = system.B.cast<std::complex<double>>();
    const Eigen::MatrixXcd C = system.C.cast<std::complex<double>>();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

    double best = 0.0;
    const double pi = std::acos(-1.0);
    for (Eigen::Index j = 0; j < grid_size; ++j) {
        const double w = grid_size == 1 ? 0.0 : pi * static_cast<double>(j) / static_cast<double>(grid_size - 1);
        const std::complex<double> z = std::polar(1.0, w);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * I - A);
        const Eigen::MatrixXcd transfer = C * lu.solve(B);
        if (!transfer.allFinite()) {
            throw NumericalError("singular resolvent while evaluating the transfer function");
        }
        const double gain = transfer.jacobiSvd().singularValues()(0);
        best = std::max(best, gain);
    }
    return best;
}

StateSpaceSystem random_system(Eigen::Index n, Eigen::Index d_u, Eigen::Index d_y,
                               RandomSeed seed) {
    if (n < 1 || d_u < 1 || d_y < 1) {
        throw std::invalid_argument("system dimensions must be positive");
    }
    auto engine = make_engine(seed);
    std::uniform_real_distribution<double> diag(0.1, 0.9);

    StateSpaceSystem system;
    system.A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        system.A(i, i) = diag(engine);
    }
    system.B = gaussian_matrix(n, d_u, 2.0, engine);
    system.C = gaussian_matrix(d_y, n, 2.0, engine);
    return system;
}

}  // namespace sysid
