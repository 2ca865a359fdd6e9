// Command-line harness for the identification library: trajectory
// generation, one-shot identification, Monte-Carlo experiment sweeps, and
// the denoising-bound property suites.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sysid/bound_checks.hpp"
#include "sysid/errors.hpp"
#include "sysid/estimators.hpp"
#include "sysid/experiment.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/lowrank.hpp"
#include "sysid/serialization.hpp"
#include "sysid/state_space.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct SimulateOptions {
    std::string system_path;
    Eigen::Index n = 0, d_u = 0, d_y = 0;
    std::uint64_t system_seed = 0;
    std::string system_out;
    Eigen::Index length = 0;
    double sigma_u = 1.0;
    double sigma_z = 0.0;
    std::uint64_t seed = 0;
    int count = 1;
    std::string output;
};

std::string numbered_path(const std::string& path, int index) {
    const auto dot = path.find_last_of('.');
    const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_%04d", index);
    return stem + suffix + ext;
}

int run_simulate(const SimulateOptions& opt) {
    sysid::StateSpaceSystem system;
    if (!opt.system_path.empty()) {
        system = sysid::load_system(opt.system_path);
    } else {
        if (opt.n < 1 || opt.d_u < 1 || opt.d_y < 1) {
            throw std::invalid_argument("either --system or all of --n/--d-u/--d-y are required");
        }
        system = sysid::random_system(opt.n, opt.d_u, opt.d_y,
                                      sysid::RandomSeed{opt.system_seed});
    }
    if (!opt.system_out.empty()) {
        sysid::save_system(system, opt.system_out);
    }

    const sysid::NoiseSpec noise{opt.sigma_u, opt.sigma_z};
    for (int i = 0; i < opt.count; ++i) {
        const auto seed = opt.count == 1
                              ? sysid::RandomSeed{opt.seed}
                              : sysid::derive_seed(sysid::RandomSeed{opt.seed},
                                                   static_cast<std::uint64_t>(i));
        const sysid::Trajectory traj =
            sysid::simulate_trajectory(system, noise, opt.length, seed);
        const std::string path = opt.count == 1 ? opt.output : numbered_path(opt.output, i);
        sysid::save_trajectory(traj, path);
    }
    return kExitOk;
}

struct IdentifyOptions {
    std::string mode;
    Eigen::Index tau = 0;
    double delta = 0.05;
    double sigma_u = 1.0;
    double sigma_z = 0.0;
    std::optional<double> beta;
    std::string system_path;
    std::vector<std::string> trajectory_paths;
    std::string output;
};

int run_identify(const IdentifyOptions& opt) {
    std::vector<sysid::Trajectory> trajectories;
    trajectories.reserve(opt.trajectory_paths.size());
    for (const std::string& path : opt.trajectory_paths) {
        trajectories.push_back(sysid::load_trajectory(path));
    }

    sysid::ThresholdParams params;
    params.sigma_u = opt.sigma_u;
    params.sigma_z = opt.sigma_z;
    params.tau = opt.tau;
    params.d_u = trajectories.front().input_dim();
    params.d_y = trajectories.front().output_dim();
    params.delta = opt.delta;

    sysid::HankelMatrix estimate;
    double xi = 0.0;
    if (opt.mode == "single") {
        if (trajectories.size() != 1) {
            throw std::invalid_argument("single mode expects exactly one trajectory file");
        }
        params.T = static_cast<long long>(trajectories.front().length());
        if (opt.beta.has_value()) {
            params.beta = *opt.beta;
        } else if (!opt.system_path.empty()) {
            params.beta = sysid::hinf_norm(sysid::load_system(opt.system_path));
        } else {
            throw std::invalid_argument("single mode needs --beta or --system for the threshold");
        }
        estimate = sysid::lse_single(sysid::build_single_design(trajectories.front(), opt.tau));
        xi = sysid::threshold_single(params);
    } else {
        params.T = static_cast<long long>(trajectories.size()) * (2 * opt.tau - 1);
        estimate = sysid::lse_multi(sysid::build_multi_design(trajectories, opt.tau));
        xi = sysid::threshold_multi(params);
    }

    const sysid::IdentificationResult result = sysid::thresholded_ho_kalman(estimate, xi);
    const std::string text = sysid::to_json(result);
    if (opt.output.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(opt.output, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open file for writing: " + opt.output);
        }
        out << text << '\n';
    }
    return kExitOk;
}

int run_experiment_cmd(const std::string& config_path) {
    const sysid::ExperimentConfig config = sysid::load_config(config_path);

    // Sample-size floors of the theory, evaluated on the drawn system.
    // Diagnostics only; they never gate the sweep.
    const sysid::ExperimentContext context = sysid::make_context(config);
    sysid::ThresholdParams params;
    params.sigma_u = config.sigma_u;
    params.sigma_z = config.sigma_z;
    params.tau = config.tau;
    params.d_u = config.d_u;
    params.d_y = config.d_y;
    params.delta = config.delta;
    params.T = config.T_grid.back();
    const double s_n = context.hankel_singular_values(config.n - 1);
    const double s_n_trimmed =
        sysid::svd(sysid::drop_last_block_column(context.hankel)).singular_values(config.n - 1);
    sysid::SampleFloors floors;
    if (config.mode == sysid::DesignKind::single_trajectory) {
        params.beta = context.beta;
        floors = sysid::sample_floors_single(params, s_n, s_n_trimmed);
    } else {
        floors = sysid::sample_floors_multi(params, s_n, s_n_trimmed);
    }
    std::cout << "sample floors (up to universal constants): T0=" << floors.T0
              << " T1=" << floors.T1 << " T2=" << floors.T2 << '\n';

    const auto records = sysid::run_experiment(config);
    int failed = 0;
    for (const auto& r : records) {
        failed += r.status == "ok" ? 0 : 1;
    }
    std::cout << "wrote " << records.size() << " trial records to " << config.output_path
              << " (" << failed << " failed)\n"
              << "summary: " << sysid::summary_path_for(config.output_path) << '\n';
    return kExitOk;
}

int run_check_bounds(int instances, std::uint64_t seed) {
    const sysid::BoundSuiteReport report =
        sysid::run_bound_suites(instances, sysid::RandomSeed{seed});
    std::cout << "prop1: " << report.prop1_pass << '/' << report.instances
              << ", lemma1: " << report.lemma1_pass << '/' << report.instances << '\n';
    return report.all_pass() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-squares Hankel estimation with singular value thresholding "
                 "and Ho-Kalman realization"};
    app.require_subcommand(1);

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Generate a system and/or simulate trajectories to CSV files");
    simulate->add_option("--system", sim.system_path, "Existing system JSON to simulate");
    simulate->add_option("--n", sim.n, "State order of a freshly drawn system");
    simulate->add_option("--d-u", sim.d_u, "Input dimension of a freshly drawn system");
    simulate->add_option("--d-y", sim.d_y, "Output dimension of a freshly drawn system");
    simulate->add_option("--system-seed", sim.system_seed, "Seed of the system draw");
    simulate->add_option("--system-out", sim.system_out, "Write the system JSON here");
    simulate->add_option("--length", sim.length, "Steps per trajectory")->required();
    simulate->add_option("--sigma-u", sim.sigma_u, "Input standard deviation");
    simulate->add_option("--sigma-z", sim.sigma_z, "Observation noise standard deviation");
    simulate->add_option("--seed", sim.seed, "Trajectory seed");
    simulate->add_option("--count", sim.count, "Number of trajectories (suffixes _0000, ...)");
    simulate->add_option("--output", sim.output, "Trajectory CSV path")->required();

    IdentifyOptions ident;
    CLI::App* identify = app.add_subcommand(
        "identify", "One-shot identification from trajectory files; prints the result JSON");
    identify->add_option("--mode", ident.mode, "single or multi")
        ->required()
        ->check(CLI::IsMember({"single", "multi"}));
    identify->add_option("--tau", ident.tau, "Hankel window length")->required();
    identify->add_option("--delta", ident.delta, "Failure probability in (0,1)");
    identify->add_option("--sigma-u", ident.sigma_u, "Input standard deviation used for the data");
    identify->add_option("--sigma-z", ident.sigma_z, "Noise standard deviation used for the data");
    double beta_value = -1.0;
    CLI::Option* beta_opt =
        identify->add_option("--beta", beta_value, "H-infinity bound (single mode)");
    identify->add_option("--system", ident.system_path,
                         "True system JSON; supplies beta in single mode when --beta is absent");
    identify->add_option("--output", ident.output, "Write the result JSON here instead of stdout");
    identify->add_option("trajectories", ident.trajectory_paths, "Trajectory CSV files")
        ->required()
        ->expected(-1);

    std::string config_path;
    CLI::App* experiment = app.add_subcommand(
        "experiment", "Full Monte-Carlo sweep over a grid of sample sizes from a config file");
    experiment->add_option("--config", config_path, "Experiment config JSON")->required();

    int instances = 200;
    std::uint64_t bounds_seed = 1;
    CLI::App* check = app.add_subcommand(
        "check-bounds", "Run the denoising-bound property suites and print pass counts");
    check->add_option("--instances", instances, "Number of random instances");
    check->add_option("--seed", bounds_seed, "Seed of the instance stream");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(sim);
        }
        if (identify->parsed()) {
            if (beta_opt->count() > 0) {
                ident.beta = beta_value;
            }
            return run_identify(ident);
        }
        if (experiment->parsed()) {
            return run_experiment_cmd(config_path);
        }
        if (check->parsed()) {
            return run_check_bounds(instances, bounds_seed);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const sysid::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
