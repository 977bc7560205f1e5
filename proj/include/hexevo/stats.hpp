#pragma once

// Run summaries and the Mann-Whitney U test used to compare strategies.

#include <cstdint>
#include <string>
#include <vector>

#include "hexevo/de.hpp"

namespace hexevo {

struct UTestResult {
    double u = 0.0;   // U statistic of the first sample
    double p = 1.0;   // two-sided
    bool exact = false;
    bool significant = false;
};

// Midranks for ties.  Small samples (n1*n2 <= exact_limit) get the exact
// null distribution (every rank assignment enumerated); larger ones use
// the tie-corrected normal approximation with continuity correction.
// Two identical-valued samples yield p = 1.  Throws std::invalid_argument
// if either sample is empty.
UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                           double alpha = 0.05, long exact_limit = 400);

// A run has converged when every member's latest evaluation completed
// the full protocol.
bool detect_convergence(const Population& pop);

struct RunSummary {
    std::string strategy;
    std::uint64_t seed = 0;
    int convergence_generation = 0;  // first all-success generation
    bool converged = false;
    double high_f = 0.0;
    double mean_f = 0.0;
    double low_f = 0.0;
    double mean_cr = 0.0;
    double mean_f_rate = 0.0;
    int restart_count = 0;  // individuals re-drawn over the whole run
};

// Metrics at the first converged generation (or the last generation when
// the run never converged).  Throws std::invalid_argument on an empty
// history.  Strategy and seed are left for the caller to fill in.
RunSummary summarize(const std::vector<GenerationStats>& history);

}  // namespace hexevo
