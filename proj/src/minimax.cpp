#include "herodraft/minimax.hpp"

#include <algorithm>
#include <cmath>

#include "herodraft/error.hpp"

namespace herodraft {

namespace {

// Identical line-ups evaluate bit-identically; the slack only absorbs
// summation-order noise from reward implementations.
constexpr double kTieTolerance = 1e-12;

double solve(const DraftState& state, const RewardFunction& reward) {
    if (state.is_terminal()) return reward.evaluate(state);
    const bool maximise = state.turn().team == Team::Radiant;
    double best = maximise ? -1.0 : 2.0;
    for (HeroId h : state.legal_actions()) {
        const double v = solve(state.apply(h), reward);
        best = maximise ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

}  // namespace

double remaining_tree_size(const DraftState& state) {
    double size = 1.0;
    const double available = static_cast<double>(state.n_heroes() - state.step());
    for (std::size_t k = 0; k < state.remaining(); ++k) size *= available - static_cast<double>(k);
    return size;
}

MinimaxResult minimax_solve(const DraftState& state, const RewardFunction& reward, double max_leaves) {
    if (state.n_heroes() != reward.n_features()) {
        throw DataError("reward expects " + std::to_string(reward.n_features()) + " heroes");
    }
    if (const double size = remaining_tree_size(state); size > max_leaves) {
        throw SizeGuardError("remaining draft has " + std::to_string(size) + " lines, limit is " +
                             std::to_string(max_leaves));
    }
    MinimaxResult result;
    if (state.is_terminal()) {
        result.value = reward.evaluate(state);
        return result;
    }
    const bool maximise = state.turn().team == Team::Radiant;
    result.value = maximise ? -1.0 : 2.0;
    for (HeroId h : state.legal_actions()) {
        const double v = solve(state.apply(h), reward);
        result.action_values.emplace_back(h, v);
        result.value = maximise ? std::max(result.value, v) : std::min(result.value, v);
    }
    for (auto [h, v] : result.action_values) {
        if (std::abs(v - result.value) <= kTieTolerance) result.optimal_actions.push_back(h);
    }
    return result;
}

}  // namespace herodraft
