// Acceptance suite: runs every release gate end to end and prints one
// pass/fail line per criterion. Exits nonzero if any gate fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sysid/bound_checks.hpp"
#include "sysid/estimators.hpp"
#include "sysid/experiment.hpp"
#include "sysid/hankel.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/lowrank.hpp"
#include "sysid/metrics.hpp"
#include "sysid/serialization.hpp"
#include "sysid/state_space.hpp"

namespace {
namespace fs = std::filesystem;
using namespace sysid;

struct Outcome {
    bool pass = false;
    std::string detail;
};

// The experiment of the reproduction criteria: the reference synthetic
// setup (n = 5, d_y = 2, d_u = 3, sigma_u = 1, sigma_z = 0.1, tau = 6,
// delta = 0.05, R = 20 trials). The master seed pins the drawn system; this
// one places the smallest Hankel singular value so that the order-recovery
// knee falls inside the sample-size grid.
constexpr std::uint64_t kSweepMasterSeed = 7;

ExperimentConfig sweep_config() {
    ExperimentConfig config;
    config.mode = DesignKind::multi_trajectory;
    config.n = 5;
    config.d_u = 3;
    config.d_y = 2;
    config.tau = 6;
    config.sigma_u = 1.0;
    config.sigma_z = 0.1;
    config.delta = 0.05;
    config.T_grid = {500, 1000, 2000, 5000, 10000, 20000};
    config.trials_per_T = 20;
    config.master_seed = kSweepMasterSeed;
    return config;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "sysid_acceptance";
    fs::create_directories(dir);
    return dir;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

char format_buffer[256];

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    std::snprintf(format_buffer, sizeof(format_buffer), fmt, args...);
    return std::string(format_buffer);
}

// ---- criterion 1 & 2: denoising bound suites --------------------------

Outcome criterion_prop1() {
    const BoundSuiteReport report = run_bound_suites(200, RandomSeed{1});
    return {report.prop1_pass == report.instances,
            strf("%d/%d instances, every k and every threshold level", report.prop1_pass,
                 report.instances)};
}

Outcome criterion_lemma1() {
    const BoundSuiteReport report = run_bound_suites(200, RandomSeed{1});
    return {report.lemma1_pass == report.instances,
            strf("%d/%d instances", report.lemma1_pass, report.instances)};
}

// ---- criterion 3: exact Ho-Kalman recovery ----------------------------

Outcome criterion_exact_recovery() {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index n = 1 + i % 6;
        const Eigen::Index d_u = 1 + i % 3;
        const Eigen::Index d_y = 1 + (i / 3) % 3;
        const Eigen::Index tau = n + 1;
        const StateSpaceSystem sys =
            random_system(n, d_u, d_y, RandomSeed{9000 + static_cast<std::uint64_t>(i)});
        const Realization r = ho_kalman(true_hankel(sys, tau), n);

        Eigen::MatrixXd state = r.B;
        for (Eigen::Index k = 0; k <= 2 * tau - 2; ++k) {
            worst = std::max(worst, frobenius_error(r.C * state, markov_parameter(sys, k)));
            state = r.A * state;
        }
    }
    return {worst <= 1e-8, strf("max Markov error %.3e over 50 systems (limit 1e-8)", worst)};
}

// ---- criterion 4: noiseless multi-trajectory LSE exactness ------------

Outcome criterion_noiseless_lse() {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = 1 + i % 5;
        const Eigen::Index d_u = 1 + i % 3;
        const Eigen::Index d_y = 1 + (i / 5) % 3;
        const Eigen::Index tau = n + 1;
        const StateSpaceSystem sys =
            random_system(n, d_u, d_y, RandomSeed{11000 + static_cast<std::uint64_t>(i)});

        const Eigen::Index runs = 2 * (2 * tau - 1) * d_u;
        std::vector<Trajectory> trajectories;
        trajectories.reserve(static_cast<std::size_t>(runs));
        for (Eigen::Index j = 0; j < runs; ++j) {
            trajectories.push_back(simulate_trajectory(
                sys, NoiseSpec{1.0, 0.0}, 2 * tau,
                derive_seed(RandomSeed{12000 + static_cast<std::uint64_t>(i)},
                            static_cast<std::uint64_t>(j))));
        }
        const HankelMatrix estimate = lse_multi(build_multi_design(trajectories, tau));
        const HankelMatrix truth = true_hankel(sys, tau);
        worst = std::max(worst,
                         frobenius_error(estimate.data, truth.data) / truth.data.norm());
    }
    return {worst <= 1e-8, strf("max relative error %.3e over 20 systems (limit 1e-8)", worst)};
}

// ---- criterion 5: stacked input-output identity ------------------------

Outcome criterion_stacked_identity() {
    const StateSpaceSystem sys = random_system(5, 3, 2, RandomSeed{13000});
    const Eigen::Index tau = 6;
    const Eigen::Index T = 40;
    const Trajectory traj = simulate_trajectory(sys, NoiseSpec{1.0, 0.0}, T, RandomSeed{13001});

    const Eigen::MatrixXd h0 = block_hankel(sys, 0, tau, tau);
    const Eigen::MatrixXd toeplitz = block_toeplitz(sys, 0, tau);
    const Eigen::Index d_u = 3;
    const Eigen::Index d_y = 2;

    double worst = 0.0;
    for (Eigen::Index t = tau + 1; t <= T - tau + 1; ++t) {  // 1-based window anchor
        Eigen::VectorXd stacked_y(tau * d_y), past_u(tau * d_u), current_u(tau * d_u);
        for (Eigen::Index k = 0; k < tau; ++k) {
            stacked_y.segment(k * d_y, d_y) = traj.outputs.col(t - 1 + k);
            past_u.segment(k * d_u, d_u) = traj.inputs.col(t - 2 - k);
            current_u.segment(k * d_u, d_u) = traj.inputs.col(t - 1 + k);
        }
        const Eigen::Index tail_len = t - tau - 1;
        Eigen::VectorXd tail_u(tail_len * d_u);
        for (Eigen::Index k = 0; k < tail_len; ++k) {
            tail_u.segment(k * d_u, d_u) = traj.inputs.col(t - tau - 2 - k);
        }
        const Eigen::VectorXd residual = stacked_y - h0 * past_u - toeplitz * current_u -
                                         block_hankel(sys, tau, tau, tail_len) * tail_u;
        worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-10, strf("max residual %.3e over all windows (limit 1e-10)", worst)};
}

// ---- criteria 6 & 7: reproduction of the reference sweep ---------------

std::vector<TrialRecord> run_sweep() {
    ExperimentConfig config = sweep_config();
    config.output_path = (work_dir() / "sweep.csv").string();
    return run_experiment(config);
}

Outcome criterion_order_recovery(const std::vector<TrialRecord>& records) {
    const auto summary = summarize(records);
    std::string curve;
    bool nondecreasing = true;
    double previous = -1.0;
    bool top_exact = true;
    for (const ExperimentSummary& s : summary) {
        curve += strf("%lld:%.2f ", s.T, s.mean_order);
        if (s.mean_order + 1e-12 < previous) {
            nondecreasing = false;
        }
        previous = s.mean_order;
        if (s.T >= 10000 && s.mean_order != 5.0) {
            top_exact = false;
        }
    }
    for (const TrialRecord& r : records) {
        if (r.T >= 10000 && (r.status != "ok" || r.order_estimate != 5)) {
            top_exact = false;
        }
    }
    return {nondecreasing && top_exact, "mean order by T: " + curve};
}

Outcome criterion_oracle_parity(const std::vector<TrialRecord>& records) {
    const auto summary = summarize(records);
    bool within_band = true;
    bool decreasing = true;
    double previous = std::numeric_limits<double>::infinity();
    std::string detail;
    for (const ExperimentSummary& s : summary) {
        if (s.T < 5000) {
            continue;
        }
        const double relative_gap =
            std::abs(s.median_markov_cab_error - s.median_oracle_cab_error) /
            s.median_oracle_cab_error;
        detail += strf("%lld:gap=%.1f%% ", s.T, 100.0 * relative_gap);
        if (relative_gap > 0.15) {
            within_band = false;
        }
        if (s.median_markov_cab_error >= previous) {
            decreasing = false;
        }
        previous = s.median_markov_cab_error;
    }
    return {within_band && decreasing, detail + "(limit 15%, medians decreasing)"};
}

// ---- criterion 8: threshold coverage ------------------------------------

Outcome criterion_coverage() {
    ExperimentConfig config = sweep_config();
    config.T_grid = {10000};
    config.trials_per_T = 200;
    config.output_path = (work_dir() / "coverage.csv").string();
    const auto records = run_experiment(config);

    int covered = 0;
    int total = 0;
    for (const TrialRecord& r : records) {
        if (r.status != "ok") {
            continue;
        }
        ++total;
        covered += r.hankel_op_error <= r.xi / 2.0 ? 1 : 0;
    }
    const double frequency = total == 0 ? 0.0 : static_cast<double>(covered) / total;
    return {total == 200 && frequency >= 0.95,
            strf("%d/%d trials with operator error <= xi/2 (need >= 95%%)", covered, total)};
}

// ---- criterion 9: convergence rate --------------------------------------

Outcome criterion_rate() {
    ExperimentConfig config = sweep_config();
    config.T_grid = {1250, 2500, 5000, 10000, 20000};
    config.output_path = (work_dir() / "rate.csv").string();
    const auto records = run_experiment(config);

    std::vector<double> log_T, log_err;
    for (const long long T : config.T_grid) {
        std::vector<double> errors;
        for (const TrialRecord& r : records) {
            if (r.T == T && r.status == "ok") {
                errors.push_back(r.hankel_op_error);
            }
        }
        log_T.push_back(std::log(static_cast<double>(T)));
        log_err.push_back(std::log(median(std::move(errors))));
    }
    const double n = static_cast<double>(log_T.size());
    const double mean_x = std::accumulate(log_T.begin(), log_T.end(), 0.0) / n;
    const double mean_y = std::accumulate(log_err.begin(), log_err.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < log_T.size(); ++i) {
        sxx += (log_T[i] - mean_x) * (log_T[i] - mean_x);
        sxy += (log_T[i] - mean_x) * (log_err[i] - mean_y);
    }
    const double slope = sxy / sxx;
    return {slope >= -0.65 && slope <= -0.35,
            strf("log-log slope %.3f (need within [-0.65, -0.35])", slope)};
}

// ---- criterion 10: CLI determinism --------------------------------------

Outcome criterion_cli_determinism() {
    const fs::path dir = work_dir();
    ExperimentConfig config = sweep_config();
    config.T_grid = {500, 1000};
    config.trials_per_T = 5;
    config.output_path = (dir / "cli_run.csv").string();

    const fs::path config_path = dir / "cli_config.json";
    {
        std::ofstream out(config_path);
        out << to_json(config) << '\n';
    }

    const std::string command = std::string("\"") + SYSID_CLI_PATH +
                                "\" experiment --config \"" + config_path.string() +
                                "\" > /dev/null";
    if (std::system(command.c_str()) != 0) {
        return {false, "first CLI run failed"};
    }
    const std::string first = read_bytes(config.output_path);
    fs::remove(config.output_path);
    if (std::system(command.c_str()) != 0) {
        return {false, "second CLI run failed"};
    }
    const std::string second = read_bytes(config.output_path);
    const bool pass = !first.empty() && first == second;
    return {pass, strf("two runs, %zu bytes each, byte-identical: %s", first.size(),
                       pass ? "yes" : "no")};
}

int run_all() {
    struct Criterion {
        int id;
        const char* name;
        double time_limit_seconds;
        std::function<Outcome()> run;
    };

    std::vector<TrialRecord> sweep;  // shared by criteria 6 and 7
    const std::vector<Criterion> criteria = {
        {1, "rank-adaptive denoising bound (200 instances)", 10.0, criterion_prop1},
        {2, "effective-rank sandwich (200 instances)", 5.0, criterion_lemma1},
        {3, "exact Ho-Kalman recovery (50 systems)", 5.0, criterion_exact_recovery},
        {4, "noiseless least-squares exactness (20 systems)", 5.0, criterion_noiseless_lse},
        {5, "stacked input-output identity", 2.0, criterion_stacked_identity},
        {6, "order recovery across the sample grid", 60.0,
         [&sweep] {
             sweep = run_sweep();
             return criterion_order_recovery(sweep);
         }},
        {7, "parity with the known-order oracle", 60.0,
         [&sweep] { return criterion_oracle_parity(sweep); }},
        {8, "threshold coverage at T = 10000 (200 trials)", 120.0, criterion_coverage},
        {9, "inverse square-root error rate", 120.0, criterion_rate},
        {10, "byte-identical experiment reruns", 60.0, criterion_cli_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < criterion.time_limit_seconds;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %2d: %s — %s (%.2f s, limit %.0f s)\n",
                    pass ? "PASS" : "FAIL", criterion.id, criterion.name,
                    outcome.detail.c_str(), seconds, criterion.time_limit_seconds);
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main() {
    return run_all();
}
