#pragma once

// DE/rand/1/bin over real-valued genomes with per-individual self-adaptive
// control rates.  Selection is greedy and strict: a child replaces its
// parent only when its fitness is strictly higher.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hexevo/rates.hpp"
#include "hexevo/rng.hpp"

namespace hexevo {

enum class Strategy { Static, Adapt, Indiv, Global };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws std::invalid_argument

using Genome = std::vector<double>;

// Per-gene domain.  Initial draws are uniform on (init_lo, init_hi];
// donor recombination may explore the wider [lo, hi].
struct GeneSpec {
    double lo = 0.0;
    double hi = 1.0;
    double init_lo = 0.0;
    double init_hi = 1.0;
};

struct Individual {
    Genome genome;
    Rates rates;
    double fitness = 0.0;
    int restart_counter = 0;
    bool success = false;
};

struct Population {
    std::vector<Individual> members;
    int global_counter = 0;
    double best_fitness_seen = 0.0;

    int size() const { return static_cast<int>(members.size()); }
};

struct EvalScore {
    double fitness = 0.0;
    bool success = false;
    int flights = 1;  // simulator flights consumed (bookkeeping only)
};

// eval_key identifies the evaluation's noise stream; see rng.hpp.
using Evaluator = std::function<EvalScore(const Genome&, std::uint64_t eval_key)>;

struct RateChange {
    int slot = -1;
    Rates before;
    Rates after;
};

struct RestartEvent {
    int generation = 0;
    bool global = false;
    std::vector<RateChange> changes;
};

struct GenerationStats {
    int generation = 0;
    double high_f = 0.0;
    double mean_f = 0.0;
    double low_f = 0.0;
    double mean_cr = 0.0;
    double mean_f_rate = 0.0;
    int restarted_slots = 0;
    int evals = 0;
    bool all_success = false;
    std::vector<RestartEvent> events;
};

struct DeConfig {
    Strategy strategy = Strategy::Adapt;
    std::vector<GeneSpec> genes;
    RateBounds rate_bounds;
    int restart_threshold = 5;
    int threads = 1;
};

// Uniform initial genome, one draw per gene in gene order.
template <class Rng>
Genome init_genome(const std::vector<GeneSpec>& genes, Rng& rng) {
    Genome g(genes.size());
    for (std::size_t i = 0; i < genes.size(); ++i)
        g[i] = genes[i].init_lo + (genes[i].init_hi - genes[i].init_lo) * rng.open_unit();
    return g;
}

// Three indices distinct from `self` and from each other, rejection
// sampled in order r1, r2, r3.  Requires n >= 4.
template <class Rng>
std::array<int, 3> pick_distinct(int n, int self, Rng& rng) {
    std::array<int, 3> r{};
    do {
        r[0] = rng.index(n);
    } while (r[0] == self);
    do {
        r[1] = rng.index(n);
    } while (r[1] == self || r[1] == r[0]);
    do {
        r[2] = rng.index(n);
    } while (r[2] == self || r[2] == r[0] || r[2] == r[1]);
    return r;
}

// v = r3 + f * (r1 - r2), clamped per gene onto [lo, hi].
inline Genome donor_vector(const Genome& r1, const Genome& r2, const Genome& r3,
                           double f, const std::vector<GeneSpec>& genes) {
    Genome v(r3.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::clamp(r3[i] + f * (r1[i] - r2[i]), genes[i].lo, genes[i].hi);
    return v;
}

// Binomial crossover.  One forced index R plus per-gene uniforms; the
// uniform is drawn for every gene (including R) so stream consumption
// does not depend on cr.
template <class Rng>
Genome binomial_crossover(const Genome& parent, const Genome& donor, double cr, Rng& rng) {
    const int dim = static_cast<int>(parent.size());
    Genome child(parent.size());
    const int forced = rng.index(dim);
    for (int i = 0; i < dim; ++i) {
        const double u = rng.unit();
        child[static_cast<std::size_t>(i)] =
            (i == forced || u < cr) ? donor[static_cast<std::size_t>(i)]
                                    : parent[static_cast<std::size_t>(i)];
    }
    return child;
}

// Strict greedy selection; ties keep the parent.
inline bool child_wins(const Individual& parent, const Individual& child) {
    return child.fitness > parent.fitness;
}

// One synchronous generation: per slot, derive child rates (mutated copy
// of the parent's, or the fixed static pair), build the donor from three
// distinct other members, cross, evaluate, then select at the barrier.
// The restart policy is applied once afterwards.  Per-slot draws come
// from streams keyed (run_seed, role, generation, slot), so results are
// identical for any thread count.
GenerationStats generation_step(Population& pop, const DeConfig& cfg,
                                const Evaluator& evaluate, std::uint64_t run_seed,
                                int generation);

}  // namespace hexevo
