#include "sysid/bound_checks.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sysid/lowrank.hpp"
#include "sysid/metrics.hpp"

namespace sysid {

namespace {
Eigen::MatrixXd standard_gaussian(Eigen::Index rows, Eigen::Index cols,
                                  std::mt19937_64& engine) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = normal(engine);
        }
    }
    return m;
}
}  // namespace

DenoisingInstance make_denoising_instance(RandomSeed seed) {
    auto engine = make_engine(seed);
    std::uniform_int_distribution<Eigen::Index> rank_dist(1, 5);
    const Eigen::Index n = rank_dist(engine);
    std::uniform_int_distribution<Eigen::Index> dim_dist(n + 1, n + 8);
    const Eigen::Index rows = dim_dist(engine);
    const Eigen::Index cols = dim_dist(engine);

    DenoisingInstance instance;
    instance.rank = n;
    instance.low_rank = standard_gaussian(rows, n, engine) *
                        standard_gaussian(cols, n, engine).transpose();

    const Eigen::VectorXd s = svd(instance.low_rank).singular_values;
    instance.s_n = s(n - 1);

    std::uniform_real_distribution<double> level_dist(0.01, 0.5);
    const double target_norm = level_dist(engine) * instance.s_n;
    Eigen::MatrixXd z = standard_gaussian(rows, cols, engine);
    z *= target_norm / svd(z).singular_values(0);
    instance.noise = z;
    instance.noise_norm = target_norm;
    return instance;
}

namespace {
bool check_prop1(const DenoisingInstance& inst) {
    const Eigen::MatrixXd noisy = inst.low_rank + inst.noise;
    const Eigen::VectorXd s = svd(inst.low_rank).singular_values;

    // Part 1: best rank-k approximation error, every k = 0..n. The tail
    // sum runs over s_{k+1} .. s_n only; H has exact rank n by construction.
    double tail = 0.0;
    for (Eigen::Index k = inst.rank; k >= 0; --k) {
        const double lhs =
            std::pow(frobenius_error(rank_k_approx(noisy, k), inst.low_rank), 2);
        const double rhs =
            18.0 * (static_cast<double>(k) * inst.noise_norm * inst.noise_norm + tail);
        if (lhs > rhs) {
            return false;
        }
        if (k > 0) {
            tail += s(k - 1) * s(k - 1);
        }
    }

    // Part 2: thresholding at xi = {2, 3, 4} ||Z||_2.
    for (const double factor : {2.0, 3.0, 4.0}) {
        const double xi = factor * inst.noise_norm;
        const ThresholdedMatrix thr = hard_threshold(noisy, xi);
        const double lhs = std::pow(frobenius_error(thr.matrix, inst.low_rank), 2);
        if (lhs > prop1_bound(s, inst.rank, xi)) {
            return false;
        }
    }
    return true;
}

bool check_lemma1(const DenoisingInstance& inst) {
    const Eigen::MatrixXd noisy = inst.low_rank + inst.noise;
    for (const double factor : {2.0, 3.0, 4.0}) {
        const double xi = factor * inst.noise_norm;
        const Eigen::Index k_xi = hard_threshold(noisy, xi).effective_rank;
        if (k_xi > inst.rank) {
            return false;
        }
        if (xi <= (2.0 / 3.0) * inst.s_n && k_xi != inst.rank) {
            return false;
        }
    }
    return true;
}

bool check_weyl(const DenoisingInstance& inst) {
    const Eigen::VectorXd s_clean = svd(inst.low_rank).singular_values;
    const Eigen::VectorXd s_noisy = svd(inst.low_rank + inst.noise).singular_values;
    // Tiny slack absorbs the SVD's own rounding at the equality edge.
    const double limit = inst.noise_norm * (1.0 + 1e-12) + 1e-14;
    return ((s_noisy - s_clean).cwiseAbs().array() <= limit).all();
}
}  // namespace

BoundSuiteReport run_bound_suites(int instances, RandomSeed seed) {
    BoundSuiteReport report;
    report.instances = instances;
    for (int i = 0; i < instances; ++i) {
        const DenoisingInstance inst =
            make_denoising_instance(derive_seed(seed, static_cast<std::uint64_t>(i)));
        report.prop1_pass += check_prop1(inst) ? 1 : 0;
        report.lemma1_pass += check_lemma1(inst) ? 1 : 0;
        report.weyl_pass += check_weyl(inst) ? 1 : 0;
    }
    return report;
}

}  // namespace sysid
