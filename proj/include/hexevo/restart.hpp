#pragma once

// Rate-restart policies.  Stagnation is counted per slot (INDIV) or for
// the whole population (GLOBAL); hitting the threshold re-initialises the
// affected individuals' rates uniformly at random.  STATIC and ADAPT
// never restart.

#include <cstdint>
#include <optional>
#include <vector>

#include "hexevo/de.hpp"

namespace hexevo {

struct RestartPolicy {
    Strategy strategy = Strategy::Adapt;
    int threshold = 5;
};

// Per-slot stagnation update (INDIV).  Returns the rate change when the
// counter reaches the threshold and the slot's rates are re-drawn.
template <class Rng>
std::optional<RateChange> update_individual(Individual& ind, int slot, bool replaced,
                                            const RestartPolicy& policy,
                                            const RateBounds& bounds, Rng& rng) {
    if (replaced) {
        ind.restart_counter = 0;
        return std::nullopt;
    }
    ++ind.restart_counter;
    if (ind.restart_counter < policy.threshold)
        return std::nullopt;
    RateChange ch{slot, ind.rates, init_rates(bounds, rng)};
    ind.rates = ch.after;
    ind.restart_counter = 0;
    return ch;
}

// Population-wide stagnation update (GLOBAL).  When the best fitness has
// not improved for `threshold` consecutive generations, every member's
// rates are re-drawn (in slot order) and all counters are cleared.
template <class Rng>
std::vector<RateChange> update_global(Population& pop, bool best_improved,
                                      const RestartPolicy& policy,
                                      const RateBounds& bounds, Rng& rng) {
    std::vector<RateChange> changes;
    if (best_improved) {
        pop.global_counter = 0;
        return changes;
    }
    ++pop.global_counter;
    if (pop.global_counter < policy.threshold)
        return changes;
    changes.reserve(pop.members.size());
    for (int i = 0; i < pop.size(); ++i) {
        Individual& ind = pop.members[static_cast<std::size_t>(i)];
        RateChange ch{i, ind.rates, init_rates(bounds, rng)};
        ind.rates = ch.after;
        ind.restart_counter = 0;
        changes.push_back(ch);
    }
    pop.global_counter = 0;
    return changes;
}

// Dispatch on strategy; at most one event per generation.
std::optional<RestartEvent> apply_restart_policy(Population& pop, const RestartPolicy& policy,
                                                 const RateBounds& bounds,
                                                 const std::vector<bool>& replaced,
                                                 bool best_improved, int generation,
                                                 RngStream& rng);

}  // namespace hexevo
