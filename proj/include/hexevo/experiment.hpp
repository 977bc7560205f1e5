#pragma once

// Experiment orchestration: seeded repeats of one strategy, CSV logging,
// and cross-strategy comparison of summary metrics.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexevo/de.hpp"
#include "hexevo/hover.hpp"
#include "hexevo/stats.hpp"

namespace hexevo {

enum ExitCode {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitSeedingFailure = 2,
    kExitNonConvergence = 3,
    kExitIoError = 4,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Strategy strategy = Strategy::Adapt;
    int repeats = 10;
    int restart_threshold = 5;
    std::uint64_t master_seed = 1;
    int max_generations = 500;
    bool allow_nonconverged = false;
    int threads = 1;
    std::string out_dir = "runs";
    HoverTaskConfig task;
};

// Key = value lines, '#' comments, dotted keys for the nested blocks
// (sim.*, wind.*, noise.*, task.*, health.*).  Unknown keys and
// malformed values raise ConfigError; unreadable files raise IoError.
ExperimentConfig load_config(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const ExperimentConfig& cfg);  // throws ConfigError

// Every repeat derives its own seed; streams below it are documented in
// rng.hpp.
std::uint64_t derive_run_seed(std::uint64_t master_seed, Strategy strategy, int repeat);

// Execute cfg.repeats runs of cfg.strategy.  Writes, under cfg.out_dir:
//   <strategy>_r<k>_generations.csv   one row per generation (row 0 = seeded pop)
//   <strategy>_r<k>_events.csv        one row per restarted individual
//   summary_<strategy>.csv            one row per repeat
// Returns the per-repeat summaries.  Throws SeedingError, IoError, or
// NonConvergence (after writing everything) when a repeat fails to
// converge and allow_nonconverged is off.
std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg);

struct CompareCell {
    std::string metric;
    std::string strategy_a;
    std::string strategy_b;
    int n_a = 0;
    int n_b = 0;
    UTestResult test;
};

struct CompareReport {
    std::vector<CompareCell> cells;
};

// Read every summary_*.csv under in_dir, pair up strategies and test
// each summary metric.  Writes <in_dir>/comparison.csv and returns the
// report.  Requires at least two strategies with two repeats each.
CompareReport compare_strategies(const std::string& in_dir, double alpha = 0.05);

// Shared CSV headers.
extern const char* const kGenerationCsvHeader;
extern const char* const kEventCsvHeader;
extern const char* const kSummaryCsvHeader;
extern const char* const kComparisonCsvHeader;

}  // namespace hexevo
