// Command-line driver: kernel tabulation, replicated DSMC runs, the radial
// Fourier steady-state solver, and standalone metric evaluation.

#include "maxkin/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides out.dir)");
    cmd->add_option("--seed", args.seed, "root seed (overrides run.seed)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads (overrides run.threads)");
}

int run(const CommonArgs& args, int (*fn)(const maxkin::ExperimentConfig&,
                                          const maxkin::KeyValueConfig&)) {
    using namespace maxkin;
    try {
        KeyValueConfig raw = KeyValueConfig::parse_file(args.config_path);
        if (!args.out_dir.empty()) raw.set("out.dir", args.out_dir);
        if (args.seed_set) raw.set("run.seed", std::to_string(args.seed));
        if (args.threads > 0) raw.set("run.threads", std::to_string(args.threads));
        ExperimentConfig cfg = ExperimentConfig::from_config(raw);
        return fn(cfg, raw);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const InvariantBreach& ex) {
        std::cerr << "invariant breach: " << ex.what() << "\n";
        return 3;
    } catch (const NonConvergence& ex) {
        std::cerr << "numerical non-convergence: " << ex.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxkin: stochastic kinetic models with random restitution"};
    app.require_subcommand(1);

    CommonArgs a_kernels, a_sim, a_steady, a_metrics;
    auto* c_kernels =
        app.add_subcommand("kernels", "tabulate the rate functions S, A, C and zeta");
    add_common(c_kernels, a_kernels);
    auto* c_sim = app.add_subcommand("simulate", "replicated DSMC runs with moment/metric traces");
    add_common(c_sim, a_sim);
    auto* c_steady = app.add_subcommand("steady", "radial Fourier steady-state solver");
    add_common(c_steady, a_steady);
    auto* c_metrics = app.add_subcommand("metrics", "distances between two sample files");
    add_common(c_metrics, a_metrics);

    CLI11_PARSE(app, argc, argv);

    if (c_kernels->parsed()) return run(a_kernels, maxkin::cmd_kernels);
    if (c_sim->parsed()) return run(a_sim, maxkin::cmd_simulate);
    if (c_steady->parsed()) return run(a_steady, maxkin::cmd_steady);
    return run(a_metrics, maxkin::cmd_metrics);
}
