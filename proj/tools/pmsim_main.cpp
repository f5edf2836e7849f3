#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pmsim/experiments.hpp"
#include "pmsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonFlags {
    std::uint64_t seed = 42;
    int reps = 0;  // 0 = scenario/suite default
    std::string out;
    int threads = 0;  // 0 = hardware concurrency
    bool no_plots = false;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed (default 42)")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
    cmd->add_option("--reps", flags.reps, "Replications per grid point (0 = default)");
    cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_option("--threads", flags.threads,
                    "Worker threads for run fan-out (0 = hardware concurrency); outputs do not "
                    "depend on this");
    cmd->add_flag("--no-plots", flags.no_plots, "Skip SVG plot emission");
}

pmsim::ExperimentOptions make_options(const CommonFlags& flags, const std::string& default_out) {
    pmsim::ExperimentOptions options;
    options.seed = flags.seed;
    options.replications = flags.reps;
    options.out_dir = flags.out.empty() ? default_out : flags.out;
    options.threads = flags.threads > 0
                          ? flags.threads
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    options.plots = !flags.no_plots;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmsim: agent-based prediction market simulator and experiment harness"};
    app.require_subcommand(1);

    CommonFlags run_flags, attr_flags, whale_flags, herd_flags, region_flags;

    std::string scenario_path;
    CLI::App* cmd_run = app.add_subcommand("run", "Execute a scenario file");
    cmd_run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    add_common(cmd_run, run_flags);

    CLI::App* cmd_attr = app.add_subcommand(
        "sweep-attributes", "Sweep each bettor attribute and tabulate MSE and dominant lag");
    add_common(cmd_attr, attr_flags);

    CLI::App* cmd_whale = app.add_subcommand(
        "sweep-whale", "Sweep whale capital share and valuation error in an expert market");
    add_common(cmd_whale, whale_flags);

    CLI::App* cmd_herd = app.add_subcommand(
        "herding-recovery", "Measure price-error recovery after a whale shock by herding level");
    add_common(cmd_herd, herd_flags);

    CLI::App* cmd_region = app.add_subcommand(
        "stability-region", "Map the stable region of the price-error recursion");
    std::vector<double> alphas = {0.05, 0.1, 0.5};
    int resolution = 201;
    cmd_region->add_option("--alphas", alphas, "Feedback-gain values, one map per value");
    cmd_region->add_option("--resolution", resolution, "Grid points per axis")
        ->check(CLI::Range(2, 4001));
    add_common(cmd_region, region_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (cmd_run->parsed()) {
            pmsim::Scenario scenario = pmsim::load_scenario(scenario_path);
            if (run_flags.seed_given) scenario.simulation.master_seed = run_flags.seed;
            if (run_flags.reps > 0) scenario.replications = run_flags.reps;
            if (!run_flags.out.empty()) scenario.output_dir = run_flags.out;
            if (run_flags.no_plots) scenario.plots = false;

            pmsim::ExperimentOptions options = make_options(run_flags, scenario.output_dir);
            options.out_dir = scenario.output_dir;
            options.plots = scenario.plots;
            pmsim::run_scenario_command(scenario, options);
            std::printf("wrote artifacts to %s\n", scenario.output_dir.c_str());
        } else if (cmd_attr->parsed()) {
            const auto options = make_options(attr_flags, "out/attributes");
            pmsim::write_attribute_artifacts(pmsim::run_attribute_sweeps(options), options);
            std::printf("wrote artifacts to %s\n", options.out_dir.string().c_str());
        } else if (cmd_whale->parsed()) {
            const auto options = make_options(whale_flags, "out/whale");
            pmsim::write_whale_artifacts(pmsim::run_whale_suite(options), options);
            std::printf("wrote artifacts to %s\n", options.out_dir.string().c_str());
        } else if (cmd_herd->parsed()) {
            const auto options = make_options(herd_flags, "out/herding");
            pmsim::write_herding_artifacts(pmsim::run_herding_recovery(options), options);
            std::printf("wrote artifacts to %s\n", options.out_dir.string().c_str());
        } else if (cmd_region->parsed()) {
            auto options = make_options(region_flags, "out/stability");
            options.alphas = alphas;
            options.region_resolution = resolution;
            for (double alpha : alphas) {
                if (!(alpha >= 0.0)) {
                    std::fprintf(stderr, "config error: --alphas values must be >= 0\n");
                    return kExitConfigError;
                }
            }
            pmsim::write_region_artifacts(options);
            std::printf("wrote artifacts to %s\n", options.out_dir.string().c_str());
        }
    } catch (const pmsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntimeError;
    }
    return kExitOk;
}
