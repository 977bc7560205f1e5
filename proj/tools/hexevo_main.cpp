// Command line front-end: `hexevo run` executes one strategy's repeats,
// `hexevo compare` tests previously written summaries against each other.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "hexevo/experiment.hpp"

namespace {

using namespace hexevo;

void add_run_options(CLI::App& run, ExperimentConfig& cfg, std::string& config_path,
                     std::string& strategy_str, bool& no_noise) {
    run.add_option("--config", config_path, "key = value config file, applied first");
    run.add_option("--strategy", strategy_str, "STATIC | ADAPT | INDIV | GLOBAL");
    run.add_option("--repeats", cfg.repeats, "independent runs of the strategy");
    run.add_option("--seed", cfg.master_seed, "master seed; every repeat derives its own");
    run.add_option("--pop-size", cfg.task.population_size, "population size");
    run.add_option("--restart-threshold", cfg.restart_threshold,
                   "non-improving generations before a restart fires");
    run.add_option("--max-generations", cfg.max_generations, "generation budget per repeat");
    run.add_flag("--no-noise", no_noise, "disable sensor noise");
    run.add_option("--out", cfg.out_dir, "output directory for CSV files");
    run.add_option("--threads", cfg.threads, "evaluation worker threads");
    run.add_flag("--allow-nonconverged", cfg.allow_nonconverged,
                 "exit 0 even when a repeat hits the generation budget");
}

int do_run(ExperimentConfig cfg) {
    const auto summaries = run_experiment(cfg);
    for (const RunSummary& s : summaries)
        std::printf("%s seed=%llu %s gen=%d high_f=%.10g restarts=%d\n", s.strategy.c_str(),
                    static_cast<unsigned long long>(s.seed),
                    s.converged ? "converged" : "NOT-CONVERGED", s.convergence_generation,
                    s.high_f, s.restart_count);
    return kExitOk;
}

int do_compare(const std::string& in_dir, double alpha) {
    const CompareReport report = compare_strategies(in_dir, alpha);
    for (const CompareCell& c : report.cells)
        std::printf("%-24s %-8s vs %-8s U=%-8.10g p=%.10g%s\n", c.metric.c_str(),
                    c.strategy_a.c_str(), c.strategy_b.c_str(), c.test.u, c.test.p,
                    c.test.significant ? "  *" : "");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-adaptive differential evolution on a simulated hexacopter hover rig"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;
    std::string strategy_str;
    bool no_noise = false;
    CLI::App* run = app.add_subcommand("run", "run one strategy's repeats and write CSVs");
    add_run_options(*run, cfg, config_path, strategy_str, no_noise);

    std::string in_dir = "runs";
    double alpha = 0.05;
    CLI::App* compare = app.add_subcommand("compare", "rank-test summary CSVs pairwise");
    compare->add_option("--in", in_dir, "directory holding summary_<strategy>.csv files");
    compare->add_option("--alpha", alpha, "significance level");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!config_path.empty()) {
                ExperimentConfig from_file = load_config(config_path);
                // Command line wins over the file for flags given twice;
                // start from the file and re-apply the parsed options.
                from_file.repeats = run->count("--repeats") ? cfg.repeats : from_file.repeats;
                from_file.master_seed = run->count("--seed") ? cfg.master_seed : from_file.master_seed;
                from_file.task.population_size =
                    run->count("--pop-size") ? cfg.task.population_size : from_file.task.population_size;
                from_file.restart_threshold =
                    run->count("--restart-threshold") ? cfg.restart_threshold : from_file.restart_threshold;
                from_file.max_generations =
                    run->count("--max-generations") ? cfg.max_generations : from_file.max_generations;
                from_file.out_dir = run->count("--out") ? cfg.out_dir : from_file.out_dir;
                from_file.threads = run->count("--threads") ? cfg.threads : from_file.threads;
                from_file.allow_nonconverged = cfg.allow_nonconverged || from_file.allow_nonconverged;
                cfg = from_file;
            }
            if (!strategy_str.empty())
                cfg.strategy = parse_strategy(strategy_str);
            if (no_noise)
                cfg.task.noise.enabled = false;
            return do_run(cfg);
        }
        return do_compare(in_dir, alpha);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const SeedingError& e) {
        std::fprintf(stderr, "seeding failed: %s\n", e.what());
        return kExitSeedingFailure;
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitNonConvergence;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIoError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIoError;
    }
}
