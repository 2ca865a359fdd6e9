#include "sysid/hankel.hpp"

#include <stdexcept>
#include <vector>

namespace sysid {

namespace {
// Markov parameters C A^t B ... C A^{t+count-1} B with a single running
// power of A.
std::vector<Eigen::MatrixXd> markov_range(const StateSpaceSystem& system, Eigen::Index t,
                                          Eigen::Index count) {
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(count));
    Eigen::MatrixXd m = system.B;
    for (Eigen::Index i = 0; i < t; ++i) {
        m = system.A * m;
    }
    for (Eigen::Index i = 0; i < count; ++i) {
        blocks.push_back(system.C * m);
        m = system.A * m;
    }
    return blocks;
}
}  // namespace

ImpulseBlockRow make_impulse_block_row(Eigen::MatrixXd data, Eigen::Index tau,
                                       Eigen::Index d_u, Eigen::Index d_y) {
    if (tau < 1 || d_u < 1 || d_y < 1) {
        throw std::invalid_argument("impulse block row dimensions must be positive");
    }
    if (data.rows() != d_y || data.cols() != (2 * tau - 1) * d_u) {
        throw std::invalid_argument("impulse block row must have 2 tau - 1 blocks of size d_y x d_u");
    }
    return ImpulseBlockRow{std::move(data), tau, d_u, d_y};
}

HankelMatrix make_hankel_matrix(Eigen::MatrixXd data, Eigen::Index tau,
                                Eigen::Index d_u, Eigen::Index d_y) {
    if (tau < 1 || d_u < 1 || d_y < 1) {
        throw std::invalid_argument("Hankel dimensions must be positive");
    }
    if (data.rows() != tau * d_y || data.cols() != tau * d_u) {
        throw std::invalid_argument("Hankel data must be (tau d_y) x (tau d_u)");
    }
    return HankelMatrix{std::move(data), tau, d_u, d_y};
}

ImpulseBlockRow impulse_block_row(const StateSpaceSystem& system, Eigen::Index tau) {
    validate(system);
    if (tau < 1) {
        throw std::invalid_argument("tau must be positive");
    }
    const Eigen::Index d_u = system.input_dim();
    const Eigen::Index d_y = system.output_dim();
    const auto blocks = markov_range(system, 0, 2 * tau - 1);

    Eigen::MatrixXd data(d_y, (2 * tau - 1) * d_u);
    for (Eigen::Index k = 0; k < 2 * tau - 1; ++k) {
        data.middleCols(k * d_u, d_u) = blocks[static_cast<std::size_t>(k)];
    }
    return ImpulseBlockRow{std::move(data), tau, d_u, d_y};
}

HankelMatrix hankel_from_impulse(const ImpulseBlockRow& g) {
    if (g.tau < 1 || g.data.rows() != g.d_y || g.data.cols() != (2 * g.tau - 1) * g.d_u) {
        throw std::invalid_argument("malformed impulse block row");
    }
    HankelMatrix h;
    h.tau = g.tau;
    h.d_u = g.d_u;
    h.d_y = g.d_y;
    h.data.resize(g.tau * g.d_y, g.tau * g.d_u);
    for (Eigen::Index i = 0; i < g.tau; ++i) {
        for (Eigen::Index j = 0; j < g.tau; ++j) {
            h.data.block(i * g.d_y, j * g.d_u, g.d_y, g.d_u) =
                g.data.middleCols((i + j) * g.d_u, g.d_u);
        }
    }
    return h;
}

HankelMatrix true_hankel(const StateSpaceSystem& system, Eigen::Index tau) {
    return hankel_from_impulse(impulse_block_row(system, tau));
}

Eigen::MatrixXd drop_last_block_column(const Eigen::MatrixXd& data, Eigen::Index d_u) {
    if (d_u < 1 || data.cols() < 2 * d_u) {
        throw std::invalid_argument("dropping a block column requires tau >= 2");
    }
    return data.leftCols(data.cols() - d_u);
}

Eigen::MatrixXd drop_first_block_column(const Eigen::MatrixXd& data, Eigen::Index d_u) {
    if (d_u < 1 || data.cols() < 2 * d_u) {
        throw std::invalid_argument("dropping a block column requires tau >= 2");
    }
    return data.rightCols(data.cols() - d_u);
}

Eigen::MatrixXd drop_last_block_column(const HankelMatrix& h) {
    if (h.tau < 2) {
        throw std::invalid_argument("dropping a block column requires tau >= 2");
    }
    return drop_last_block_column(h.data, h.d_u);
}

Eigen::MatrixXd drop_first_block_column(const HankelMatrix& h) {
    if (h.tau < 2) {
        throw std::invalid_argument("dropping a block column requires tau >= 2");
    }
    return drop_first_block_column(h.data, h.d_u);
}

Eigen::MatrixXd block_hankel(const StateSpaceSystem& system, Eigen::Index t,
                             Eigen::Index tau1, Eigen::Index tau2) {
    validate(system);
    if (t < 0 || tau1 < 1 || tau2 < 0) {
        throw std::invalid_argument("block_hankel requires t >= 0, tau1 >= 1, tau2 >= 0");
    }
    const Eigen::Index d_u = system.input_dim();
    const Eigen::Index d_y = system.output_dim();
    Eigen::MatrixXd out(tau1 * d_y, tau2 * d_u);
    if (tau2 == 0) {
        return out;
    }
    const auto blocks = markov_range(system, t, tau1 + tau2 - 1);
    for (Eigen::Index i = 0; i < tau1; ++i) {
        for (Eigen::Index j = 0; j < tau2; ++j) {
            out.block(i * d_y, j * d_u, d_y, d_u) = blocks[static_cast<std::size_t>(i + j)];
        }
    }
    return out;
}

Eigen::MatrixXd block_toeplitz(const StateSpaceSystem& system, Eigen::Index t,
                               Eigen::Index tau) {
    validate(system);
    if (t < 0 || tau < 1) {
        throw std::invalid_argument("block_toeplitz requires t >= 0 and tau >= 1");
    }
    const Eigen::Index d_u = system.input_dim();
    const Eigen::Index d_y = system.output_dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(tau * d_y, tau * d_u);
    if (tau == 1) {
        return out;
    }
    const auto blocks = markov_range(system, t, tau - 1);  // exponents t .. t+tau-2
    for (Eigen::Index i = 0; i < tau; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            out.block(i * d_y, j * d_u, d_y, d_u) = blocks[static_cast<std::size_t>(i - j - 1)];
        }
    }
    return out;
}

}  // namespace sysid
