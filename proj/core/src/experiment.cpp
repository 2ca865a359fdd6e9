#include "sysid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "sysid/errors.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/lowrank.hpp"
#include "sysid/serialization.hpp"

namespace sysid {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream tag separating the system draw from the trial data streams.
constexpr std::uint64_t kSystemStream = 0x53;  // 'S'

RandomSeed trial_seed(const ExperimentConfig& config, long long T, int trial_index) {
    return derive_seed(RandomSeed{config.master_seed}, static_cast<std::uint64_t>(T),
                       static_cast<std::uint64_t>(trial_index) + 1);
}

int thread_budget() {
    if (const char* env = std::getenv("SYSID_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1) {
            return requested;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

void validate(const ExperimentConfig& config) {
    if (config.n < 1 || config.d_u < 1 || config.d_y < 1 || config.tau < 1) {
        throw std::invalid_argument("n, d_u, d_y, tau must be positive");
    }
    if (config.tau < config.n + 1) {
        if (!config.allow_small_tau) {
            throw std::invalid_argument(
                "tau must be at least n + 1 for rank recovery; set allow_small_tau to override");
        }
        std::cerr << "warning: tau < n + 1; the Hankel matrix cannot expose the full order\n";
    }
    if (config.mode == DesignKind::multi_trajectory && config.tau < 2) {
        throw std::invalid_argument("multi-trajectory mode requires tau >= 2");
    }
    if (config.sigma_u <= 0.0) {
        throw std::invalid_argument("sigma_u must be positive");
    }
    if (config.sigma_z < 0.0) {
        throw std::invalid_argument("sigma_z must be nonnegative");
    }
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (config.T_grid.empty()) {
        throw std::invalid_argument("T_grid must be nonempty");
    }
    if (!std::is_sorted(config.T_grid.begin(), config.T_grid.end()) ||
        config.T_grid.front() < 1) {
        throw std::invalid_argument("T_grid must be ascending and positive");
    }
    for (std::size_t i = 1; i < config.T_grid.size(); ++i) {
        if (config.T_grid[i] == config.T_grid[i - 1]) {
            throw std::invalid_argument("T_grid entries must be distinct");
        }
    }
    if (config.trials_per_T < 1) {
        throw std::invalid_argument("trials_per_T must be positive");
    }
    if (config.beta_override.has_value() && *config.beta_override < 0.0) {
        throw std::invalid_argument("beta_override must be nonnegative");
    }
}

ExperimentContext make_context(const ExperimentConfig& config) {
    validate(config);

    ExperimentContext context;
    context.config = config;
    context.system = random_system(config.n, config.d_u, config.d_y,
                                   derive_seed(RandomSeed{config.master_seed}, kSystemStream));
    context.hankel = true_hankel(context.system, config.tau);
    context.hankel_singular_values = svd(context.hankel.data).singular_values;
    context.true_cab = markov_parameter(context.system, 1);
    if (config.mode == DesignKind::single_trajectory) {
        context.beta = config.beta_override.value_or(hinf_norm(context.system));
    }
    return context;
}

namespace {
HankelMatrix estimate_hankel(const ExperimentContext& context, long long T, RandomSeed seed) {
    const ExperimentConfig& cfg = context.config;
    const NoiseSpec noise{cfg.sigma_u, cfg.sigma_z};

    if (cfg.mode == DesignKind::multi_trajectory) {
        const long long trajectory_count = T / (2 * cfg.tau - 1);
        if (trajectory_count < 1) {
            throw std::invalid_argument("sample budget too small for one trajectory");
        }
        std::vector<Trajectory> runs;
        runs.reserve(static_cast<std::size_t>(trajectory_count));
        for (long long i = 0; i < trajectory_count; ++i) {
            runs.push_back(simulate_trajectory(context.system, noise, 2 * cfg.tau,
                                               derive_seed(seed, static_cast<std::uint64_t>(i))));
        }
        return lse_multi(build_multi_design(runs, cfg.tau));
    }

    const Trajectory traj = simulate_trajectory(context.system, noise, T, seed);
    return lse_single(build_single_design(traj, cfg.tau));
}

double trial_threshold(const ExperimentContext& context, long long T) {
    const ExperimentConfig& cfg = context.config;
    ThresholdParams params;
    params.sigma_u = cfg.sigma_u;
    params.sigma_z = cfg.sigma_z;
    params.tau = cfg.tau;
    params.d_u = cfg.d_u;
    params.d_y = cfg.d_y;
    params.delta = cfg.delta;
    params.T = T;
    if (cfg.mode == DesignKind::single_trajectory) {
        params.beta = context.beta;
        return threshold_single(params);
    }
    return threshold_multi(params);
}
}  // namespace

TrialRecord run_trial(const ExperimentContext& context, long long T, int trial_index) {
    TrialRecord record;
    record.T = T;
    record.trial_index = trial_index;
    record.xi = kNaN;
    record.order_estimate = 0;
    record.hankel_op_error = kNaN;
    record.hankel_fro_error_thresholded = kNaN;
    record.markov_cab_error = kNaN;
    record.oracle_cab_error = kNaN;
    record.bound_rhs_prop1 = kNaN;

    try {
        const double xi = trial_threshold(context, T);
        record.xi = xi;

        const HankelMatrix estimate =
            estimate_hankel(context, T, trial_seed(context.config, T, trial_index));

        record.hankel_op_error = operator_error(estimate.data, context.hankel.data);
        record.bound_rhs_prop1 =
            prop1_bound(context.hankel_singular_values, context.config.n, xi);

        const IdentificationResult identified = thresholded_ho_kalman(estimate, xi);
        record.order_estimate = identified.order;
        record.hankel_fro_error_thresholded =
            frobenius_error(hard_threshold(estimate.data, xi).matrix, context.hankel.data);
        record.markov_cab_error =
            markov_error(identified, context.system, 2)[1];

        // Known-order oracle on the same estimate: project to rank n, then
        // factor at rank n.
        const HankelMatrix projected = make_hankel_matrix(
            rank_k_approx(estimate.data, context.config.n), context.config.tau,
            context.config.d_u, context.config.d_y);
        const Realization oracle = ho_kalman(projected, context.config.n);
        record.oracle_cab_error =
            frobenius_error(oracle.C * oracle.A * oracle.B, context.true_cab);
    } catch (const std::invalid_argument& e) {
        record.status = std::string("failed:") + e.what();
    } catch (const NumericalError& e) {
        record.status = std::string("failed:") + e.what();
    }
    return record;
}

TrialRecord run_trial(const ExperimentConfig& config, long long T, int trial_index) {
    return run_trial(make_context(config), T, trial_index);
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return kNaN;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<ExperimentSummary> summarize(const std::vector<TrialRecord>& records) {
    std::vector<long long> grid;
    for (const TrialRecord& r : records) {
        if (grid.empty() || grid.back() != r.T) {
            grid.push_back(r.T);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<ExperimentSummary> summary;
    summary.reserve(grid.size());
    for (const long long T : grid) {
        ExperimentSummary s;
        s.T = T;
        std::vector<double> orders, markov, oracle, fro;
        for (const TrialRecord& r : records) {
            if (r.T != T || r.status != "ok") {
                continue;
            }
            orders.push_back(static_cast<double>(r.order_estimate));
            markov.push_back(r.markov_cab_error);
            oracle.push_back(r.oracle_cab_error);
            fro.push_back(r.hankel_fro_error_thresholded);
        }
        s.mean_order = orders.empty()
                           ? kNaN
                           : std::accumulate(orders.begin(), orders.end(), 0.0) /
                                 static_cast<double>(orders.size());
        s.median_markov_cab_error = median(std::move(markov));
        s.median_oracle_cab_error = median(std::move(oracle));
        s.median_hankel_fro_error = median(std::move(fro));
        summary.push_back(std::move(s));
    }
    return summary;
}

std::string summary_path_for(const std::string& output_path) {
    const std::string suffix = ".csv";
    if (output_path.size() > suffix.size() &&
        output_path.compare(output_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return output_path.substr(0, output_path.size() - suffix.size()) + ".summary.json";
    }
    return output_path + ".summary.json";
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
    const ExperimentContext context = make_context(config);

    // Fail on an unwritable output path before any computation.
    std::ofstream csv(config.output_path, std::ios::binary | std::ios::trunc);
    if (!csv) {
        throw std::runtime_error("cannot open output path: " + config.output_path);
    }
    std::ofstream summary_file(summary_path_for(config.output_path),
                               std::ios::binary | std::ios::trunc);
    if (!summary_file) {
        throw std::runtime_error("cannot open summary path: " +
                                 summary_path_for(config.output_path));
    }

    struct Task {
        long long T;
        int trial;
    };
    std::vector<Task> tasks;
    for (const long long T : config.T_grid) {
        for (int trial = 0; trial < config.trials_per_T; ++trial) {
            tasks.push_back({T, trial});
        }
    }

    std::vector<TrialRecord> records(tasks.size());
    const int workers = std::min<int>(thread_budget(), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            records[i] = run_trial(context, tasks[i].T, tasks[i].trial);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                    records[i] = run_trial(context, tasks[i].T, tasks[i].trial);
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    std::sort(records.begin(), records.end(), [](const TrialRecord& a, const TrialRecord& b) {
        return a.T != b.T ? a.T < b.T : a.trial_index < b.trial_index;
    });

    write_trial_records_csv(records, csv);
    csv.close();
    summary_file << summary_to_json(summarize(records));
    summary_file << '\n';
    summary_file.close();
    return records;
}

}  // namespace sysid
