#include "hexevo/de.hpp"

#include <cctype>
#include <numeric>

#include "hexevo/parallel.hpp"
#include "hexevo/restart.hpp"

namespace hexevo {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Static: return "static";
        case Strategy::Adapt: return "adapt";
        case Strategy::Indiv: return "indiv";
        case Strategy::Global: return "global";
    }
    return "?";
}

Strategy parse_strategy(const std::string& name) {
    std::string s(name.size(), '\0');
    std::transform(name.begin(), name.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "static") return Strategy::Static;
    if (s == "adapt") return Strategy::Adapt;
    if (s == "indiv") return Strategy::Indiv;
    if (s == "global") return Strategy::Global;
    throw std::invalid_argument("unknown strategy: " + name);
}

GenerationStats generation_step(Population& pop, const DeConfig& cfg,
                                const Evaluator& evaluate, std::uint64_t run_seed,
                                int generation) {
    const int n = pop.size();
    if (n < 4)
        throw std::invalid_argument("population size must be at least 4");

    // Build every child from the parent population.  Draw order per slot:
    // child rates (two normals, unless STATIC), donor indices, crossover.
    std::vector<Individual> children(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        RngStream ops(mix_seed({run_seed, stream::kOps,
                                static_cast<std::uint64_t>(generation),
                                static_cast<std::uint64_t>(i)}));
        const Individual& parent = pop.members[static_cast<std::size_t>(i)];
        Individual child;
        child.rates = cfg.strategy == Strategy::Static
                          ? static_rates()
                          : mutate_rates(parent.rates, cfg.rate_bounds, ops);
        const auto r = pick_distinct(n, i, ops);
        const Genome donor = donor_vector(pop.members[static_cast<std::size_t>(r[0])].genome,
                                          pop.members[static_cast<std::size_t>(r[1])].genome,
                                          pop.members[static_cast<std::size_t>(r[2])].genome,
                                          child.rates.f, cfg.genes);
        child.genome = binomial_crossover(parent.genome, donor, child.rates.cr, ops);
        children[static_cast<std::size_t>(i)] = std::move(child);
    }

    // Concurrent evaluation; per-slot noise streams keep the result
    // independent of scheduling.  A throwing evaluator marks the child as
    // a non-flyer (fitness 0) rather than aborting the generation.
    std::vector<int> flights(static_cast<std::size_t>(n), 1);
    parallel_for(n, cfg.threads, [&](int i) {
        const std::uint64_t key = mix_seed({run_seed, stream::kEval,
                                            static_cast<std::uint64_t>(generation),
                                            static_cast<std::uint64_t>(i)});
        Individual& child = children[static_cast<std::size_t>(i)];
        try {
            EvalScore score = evaluate(child.genome, key);
            child.fitness = score.fitness;
            child.success = score.success;
            flights[static_cast<std::size_t>(i)] = score.flights;
        } catch (...) {
            child.fitness = 0.0;
            child.success = false;
        }
    });

    // Selection at the generation barrier, in slot order.
    std::vector<bool> replaced(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        Individual& parent = pop.members[static_cast<std::size_t>(i)];
        Individual& child = children[static_cast<std::size_t>(i)];
        if (child_wins(parent, child)) {
            child.restart_counter = 0;
            parent = std::move(child);
            replaced[static_cast<std::size_t>(i)] = true;
        }
    }

    double best = pop.members[0].fitness;
    for (const Individual& m : pop.members)
        best = std::max(best, m.fitness);
    const bool improved = best > pop.best_fitness_seen;
    pop.best_fitness_seen = std::max(pop.best_fitness_seen, best);

    GenerationStats st;
    st.generation = generation;
    RestartPolicy policy{cfg.strategy, cfg.restart_threshold};
    RngStream restart_rng(mix_seed({run_seed, stream::kRestart,
                                    static_cast<std::uint64_t>(generation)}));
    auto event = apply_restart_policy(pop, policy, cfg.rate_bounds, replaced, improved,
                                      generation, restart_rng);
    if (event) {
        st.restarted_slots = static_cast<int>(event->changes.size());
        st.events.push_back(std::move(*event));
    }

    st.high_f = best;
    st.low_f = pop.members[0].fitness;
    double sum_f = 0.0, sum_cr = 0.0, sum_fr = 0.0;
    st.all_success = true;
    for (const Individual& m : pop.members) {
        st.low_f = std::min(st.low_f, m.fitness);
        sum_f += m.fitness;
        sum_cr += m.rates.cr;
        sum_fr += m.rates.f;
        st.all_success = st.all_success && m.success;
    }
    st.mean_f = sum_f / n;
    st.mean_cr = sum_cr / n;
    st.mean_f_rate = sum_fr / n;
    st.evals = std::accumulate(flights.begin(), flights.end(), 0);
    return st;
}

}  // namespace hexevo
