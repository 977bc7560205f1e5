#include "hexevo/restart.hpp"

namespace hexevo {

std::optional<RestartEvent> apply_restart_policy(Population& pop, const RestartPolicy& policy,
                                                 const RateBounds& bounds,
                                                 const std::vector<bool>& replaced,
                                                 bool best_improved, int generation,
                                                 RngStream& rng) {
    RestartEvent ev;
    ev.generation = generation;
    switch (policy.strategy) {
        case Strategy::Static:
        case Strategy::Adapt:
            return std::nullopt;
        case Strategy::Indiv:
            for (int i = 0; i < pop.size(); ++i) {
                auto ch = update_individual(pop.members[static_cast<std::size_t>(i)], i,
                                            replaced[static_cast<std::size_t>(i)], policy,
                                            bounds, rng);
                if (ch)
                    ev.changes.push_back(*ch);
            }
            break;
        case Strategy::Global:
            ev.global = true;
            ev.changes = update_global(pop, best_improved, policy, bounds, rng);
            break;
    }
    if (ev.changes.empty())
        return std::nullopt;
    return ev;
}

}  // namespace hexevo
