#pragma once

#include <cstddef>

#include "herodraft/draft.hpp"

namespace herodraft {

/// Maps a completed draft to Radiant's win probability w(s) in [0, 1].
/// Implementations must be safe for concurrent const use.
class RewardFunction {
public:
    virtual ~RewardFunction() = default;

    virtual std::size_t n_features() const = 0;
    virtual double evaluate(const DraftState& terminal) const = 0;
};

/// Reward of `team` for a terminal draft worth `radiant_w` to Radiant.
constexpr double team_reward(Team team, double radiant_w) {
    return team == Team::Radiant ? radiant_w : 1.0 - radiant_w;
}

}  // namespace herodraft
