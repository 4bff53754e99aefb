#pragma once

// Exhaustive minimax over the remaining draft, used to check the search on
// small instances.

#include <utility>
#include <vector>

#include "herodraft/draft.hpp"
#include "herodraft/reward.hpp"

namespace herodraft {

struct MinimaxResult {
    /// Game value in Radiant's terms: Radiant maximises w, Dire minimises it.
    double value = 0.0;
    /// Root actions achieving the value; empty for terminal states.
    std::vector<HeroId> optimal_actions;
    /// Backed-up value of every root action, increasing hero id.
    std::vector<std::pair<HeroId, double>> action_values;
};

/// Number of leaves below `state`: the product of remaining branching factors.
double remaining_tree_size(const DraftState& state);

/// SizeGuardError if remaining_tree_size(state) exceeds `max_leaves`.
MinimaxResult minimax_solve(const DraftState& state, const RewardFunction& reward,
                            double max_leaves = 1e7);

}  // namespace herodraft
