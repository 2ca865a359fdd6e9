#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>

#include "sysid/hankel.hpp"
#include "sysid/lowrank.hpp"
#include "sysid/state_space.hpp"
#include "test_helpers.hpp"

using namespace sysid;
using sysid::testing::max_abs_diff;
using sysid::testing::scalar_system;

namespace {
Eigen::Index rank_at(const Eigen::MatrixXd& m, double rel_tol = 1e-8) {
    const Eigen::VectorXd s = svd(m).singular_values;
    Eigen::Index rank = 0;
    while (rank < s.size() && s(0) > 0.0 && s(rank) >= rel_tol * s(0)) {
        ++rank;
    }
    return rank;
}
}  // namespace

TEST_SUITE_BEGIN("hankel");

TEST_CASE("impulse block row of the scalar system") {
    const ImpulseBlockRow g = impulse_block_row(scalar_system(), 2);
    Eigen::MatrixXd expected(1, 3);
    expected << 1.0, 0.5, 0.25;
    CHECK(max_abs_diff(g.data, expected) <= 1e-15);
    CHECK(g.tau == 2);
}

TEST_CASE("impulse block row vanishes with B = 0") {
    const ImpulseBlockRow g = impulse_block_row(scalar_system(0.5, 0.0, 1.0), 3);
    CHECK(g.data.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("impulse block row blocks are the markov parameters") {
    const StateSpaceSystem sys = random_system(3, 2, 2, RandomSeed{101});
    const ImpulseBlockRow g = impulse_block_row(sys, 4);
    for (Eigen::Index k = 0; k < 2 * 4 - 1; ++k) {
        CHECK(max_abs_diff(g.data.middleCols(k * 2, 2), markov_parameter(sys, k)) == 0.0);
    }
}

TEST_CASE("hankel_from_impulse") {
    SUBCASE("scalar example") {
        Eigen::MatrixXd data(1, 3);
        data << 1.0, 0.5, 0.25;
        const HankelMatrix h = hankel_from_impulse(make_impulse_block_row(data, 2, 1, 1));
        Eigen::MatrixXd expected(2, 2);
        expected << 1.0, 0.5, 0.5, 0.25;
        CHECK(max_abs_diff(h.data, expected) == 0.0);
    }
    SUBCASE("zero row maps to the zero matrix") {
        const HankelMatrix h =
            hankel_from_impulse(make_impulse_block_row(Eigen::MatrixXd::Zero(2, 10), 3, 2, 2));
        CHECK(h.data.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("the map is linear") {
        auto engine = make_engine(RandomSeed{103});
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd a(2, 10), b(2, 10);
        for (Eigen::Index j = 0; j < 10; ++j) {
            for (Eigen::Index i = 0; i < 2; ++i) {
                a(i, j) = normal(engine);
                b(i, j) = normal(engine);
            }
        }
        const Eigen::MatrixXd lhs =
            hankel_from_impulse(make_impulse_block_row(a + b, 3, 2, 2)).data;
        const Eigen::MatrixXd rhs =
            hankel_from_impulse(make_impulse_block_row(a, 3, 2, 2)).data +
            hankel_from_impulse(make_impulse_block_row(b, 3, 2, 2)).data;
        CHECK(max_abs_diff(lhs, rhs) <= 1e-14);
    }
    SUBCASE("malformed block count is rejected") {
        CHECK_THROWS_AS(make_impulse_block_row(Eigen::MatrixXd::Zero(1, 4), 2, 1, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("true hankel of the scalar system") {
    const HankelMatrix h = true_hankel(scalar_system(), 2);
    Eigen::MatrixXd expected(2, 2);
    expected << 1.0, 0.5, 0.5, 0.25;
    CHECK(max_abs_diff(h.data, expected) <= 1e-15);
    const Eigen::VectorXd s = svd(h.data).singular_values;
    CHECK(s(0) == doctest::Approx(1.25).epsilon(1e-12));  // rank-1 outer product v v^T
    CHECK(rank_at(h.data) == 1);
}

TEST_CASE("true hankel rank equals the order at tau = n + 1") {
    for (std::uint64_t seed : {107u, 109u, 113u}) {
        const StateSpaceSystem sys = random_system(3, 2, 2, RandomSeed{seed});
        CHECK(rank_at(true_hankel(sys, 4).data) == 3);
    }
}

TEST_CASE("true hankel of B = 0 is the zero matrix") {
    const HankelMatrix h = true_hankel(scalar_system(0.5, 0.0, 1.0), 3);
    CHECK(h.data.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rank_at(h.data) == 0);
}

TEST_CASE("block column trimming") {
    SUBCASE("scalar slices") {
        const HankelMatrix h = true_hankel(scalar_system(), 2);
        Eigen::MatrixXd right(2, 1), left(2, 1);
        right << 1.0, 0.5;
        left << 0.5, 0.25;
        CHECK(max_abs_diff(drop_last_block_column(h), right) <= 1e-15);
        CHECK(max_abs_diff(drop_first_block_column(h), left) <= 1e-15);
    }
    SUBCASE("block width honours d_u") {
        const StateSpaceSystem sys = random_system(2, 2, 1, RandomSeed{127});
        const HankelMatrix h = true_hankel(sys, 2);
        CHECK(h.data.cols() == 4);
        CHECK(max_abs_diff(drop_last_block_column(h), h.data.leftCols(2)) == 0.0);
        CHECK(max_abs_diff(drop_first_block_column(h), h.data.rightCols(2)) == 0.0);
    }
    SUBCASE("tau = 1 is rejected") {
        CHECK_THROWS_AS(drop_last_block_column(true_hankel(scalar_system(), 1)),
                        std::invalid_argument);
    }
    SUBCASE("trimmed matrix keeps rank n for tau >= n + 1") {
        const StateSpaceSystem sys = random_system(3, 2, 2, RandomSeed{131});
        const HankelMatrix h = true_hankel(sys, 4);
        CHECK(rank_at(drop_last_block_column(h)) == 3);
    }
    SUBCASE("shifted blocks of the first-column trim are markov parameters") {
        const StateSpaceSystem sys = random_system(2, 1, 2, RandomSeed{137});
        const HankelMatrix h = true_hankel(sys, 3);
        const Eigen::MatrixXd left = drop_first_block_column(h);
        for (Eigen::Index i = 0; i < 3; ++i) {
            for (Eigen::Index j = 0; j + 1 < 3; ++j) {
                CHECK(max_abs_diff(left.block(i * 2, j, 2, 1),
                                   markov_parameter(sys, i + j + 1)) == 0.0);
            }
        }
    }
}

TEST_CASE("general block hankel") {
    const StateSpaceSystem sys = random_system(3, 2, 2, RandomSeed{139});
    SUBCASE("t = 0 square case coincides with the Hankel matrix") {
        CHECK(max_abs_diff(block_hankel(sys, 0, 4, 4), true_hankel(sys, 4).data) == 0.0);
    }
    SUBCASE("zero width gives an empty matrix with the right row count") {
        const Eigen::MatrixXd empty = block_hankel(sys, 2, 3, 0);
        CHECK(empty.rows() == 6);
        CHECK(empty.cols() == 0);
    }
    SUBCASE("scalar shifted entry") {
        CHECK(block_hankel(scalar_system(), 1, 1, 1)(0, 0) ==
              doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("block toeplitz") {
    SUBCASE("tau = 1 has no strictly-lower blocks") {
        CHECK(block_toeplitz(scalar_system(), 0, 1).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("scalar tau = 3 lays out the impulse response below the diagonal") {
        Eigen::MatrixXd expected(3, 3);
        expected << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 1.0, 0.0;
        CHECK(max_abs_diff(block_toeplitz(scalar_system(), 0, 3), expected) <= 1e-15);
    }
    SUBCASE("B = 0 gives zero") {
        CHECK(block_toeplitz(scalar_system(0.5, 0.0, 1.0), 1, 4).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("stacked input-output identity holds on noiseless data") {
    const StateSpaceSystem sys = random_system(5, 3, 2, RandomSeed{149});
    const Eigen::Index tau = 6;
    const Eigen::Index T = 30;
    const Trajectory traj = simulate_trajectory(sys, NoiseSpec{1.0, 0.0}, T, RandomSeed{151});

    const Eigen::MatrixXd h0 = block_hankel(sys, 0, tau, tau);
    const Eigen::MatrixXd toeplitz = block_toeplitz(sys, 0, tau);

    for (Eigen::Index t = tau + 1; t <= T - tau + 1; ++t) {  // 1-based
        Eigen::VectorXd stacked_y(tau * 2);
        Eigen::VectorXd past_u(tau * 3);
        Eigen::VectorXd current_u(tau * 3);
        for (Eigen::Index k = 0; k < tau; ++k) {
            stacked_y.segment(k * 2, 2) = traj.outputs.col(t - 1 + k);
            past_u.segment(k * 3, 3) = traj.inputs.col(t - 2 - k);
            current_u.segment(k * 3, 3) = traj.inputs.col(t - 1 + k);
        }
        const Eigen::Index tail_len = t - tau - 1;
        Eigen::VectorXd tail_u(tail_len * 3);
        for (Eigen::Index k = 0; k < tail_len; ++k) {
            tail_u.segment(k * 3, 3) = traj.inputs.col(t - tau - 2 - k);
        }
        const Eigen::MatrixXd tail_map = block_hankel(sys, tau, tau, tail_len);

        const Eigen::VectorXd residual =
            stacked_y - h0 * past_u - toeplitz * current_u - tail_map * tail_u;
        CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("submatrix norms never exceed the full matrix") {
    for (std::uint64_t seed : {157u, 163u, 167u}) {
        const StateSpaceSystem sys = random_system(3, 2, 2, RandomSeed{seed});
        const HankelMatrix h = true_hankel(sys, 4);
        const Eigen::VectorXd s_full = svd(h.data).singular_values;
        const Eigen::VectorXd s_trim = svd(drop_last_block_column(h)).singular_values;
        CHECK(s_trim(0) <= s_full(0) * (1.0 + 1e-12));
        CHECK(s_trim(2) <= s_full(2) * (1.0 + 1e-12));  // s_n ordering, n = 3
    }
}

TEST_SUITE_END();
