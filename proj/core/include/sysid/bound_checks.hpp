#pragma once

#include <Eigen/Core>

#include "sysid/random.hpp"

namespace sysid {

/// One random low-rank-plus-noise instance: H = X Y^T with standard
/// Gaussian factors (exact rank n) and Gaussian Z rescaled so that
/// ||Z||_2 lands in [0.01, 0.5] s_n(H). The range spans both the
/// full-recovery and the truncated-rank regimes of the thresholding bounds.
struct DenoisingInstance {
    Eigen::MatrixXd low_rank;  // H
    Eigen::MatrixXd noise;     // Z
    Eigen::Index rank = 0;     // n
    double noise_norm = 0.0;   // ||Z||_2
    double s_n = 0.0;          // s_n(H)
};

DenoisingInstance make_denoising_instance(RandomSeed seed);

/// Pass counts of the denoising inequality suites over seeded instances.
struct BoundSuiteReport {
    int instances = 0;
    int prop1_pass = 0;  // both rank-capped inequalities, all k and xi
    int lemma1_pass = 0; // effective-rank bounds at xi >= 2 ||Z||_2
    int weyl_pass = 0;   // |s_i(H+Z) - s_i(H)| <= ||Z||_2 for all i

    bool all_pass() const {
        return prop1_pass == instances && lemma1_pass == instances && weyl_pass == instances;
    }
};

/// Checks, on each instance: the best-rank-k error bound
/// ||Pi_k(H+Z) - H||_F^2 <= 18 (k ||Z||_2^2 + sum_{i>k} s_i^2(H)) for every
/// k = 0..n, the thresholded variant at xi in {2, 3, 4} ||Z||_2, the
/// effective-rank sandwich (k_xi <= n, and k_xi = n when additionally
/// xi <= (2/3) s_n(H)), and Weyl's inequality.
BoundSuiteReport run_bound_suites(int instances, RandomSeed seed);

}  // namespace sysid
