#pragma once

// Drafting strategies behind one interface: random (RD), highest win rate
// (HWR), association rules (AR) and UCT.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "herodraft/dataset.hpp"
#include "herodraft/random.hpp"
#include "herodraft/reward.hpp"
#include "herodraft/rules.hpp"
#include "herodraft/uct.hpp"

namespace herodraft {

/// Picks or bans for whichever team is on turn. Implementations hold only
/// immutable data; all randomness comes from the caller's generator.
class Strategy {
public:
    virtual ~Strategy() = default;

    virtual std::string name() const = 0;
    /// Must return a legal action of the non-terminal `state`.
    virtual HeroId recommend(const DraftState& state, Rng& rng) const = 0;
};

HeroId rd_recommend(const DraftState& state, Rng& rng);

/// Highest win rate among legal heroes, ties to the lowest id. Used for bans
/// as well as picks.
HeroId hwr_recommend(const DraftState& state, const HeroStats& stats);

struct ArDecision {
    HeroId hero = 0;
    std::vector<HeroId> pool;  // candidates the hero was drawn from
    bool fallback = false;     // no rule applied; hero drawn uniformly
};

/// Candidate pool: the top `pool_cap` heroes completing an ally rule with the
/// team's own picks (ranked by win rate) plus the top `pool_cap` heroes that
/// are enemy-rule targets of the opponent's picks (ranked by confidence).
/// Metric ties prefer the higher hero win rate, then the lower id. On ban
/// turns the pool is built for the opponent, i.e. the hero they would want.
ArDecision ar_recommend(const DraftState& state, const RuleSet& rules, const HeroStats& stats, Rng& rng,
                        std::size_t pool_cap = 5);

class RandomStrategy final : public Strategy {
public:
    std::string name() const override { return "rd"; }
    HeroId recommend(const DraftState& state, Rng& rng) const override { return rd_recommend(state, rng); }
};

class HighestWinRateStrategy final : public Strategy {
public:
    explicit HighestWinRateStrategy(std::shared_ptr<const HeroStats> stats) : stats_(std::move(stats)) {}
    std::string name() const override { return "hwr"; }
    HeroId recommend(const DraftState& state, Rng&) const override { return hwr_recommend(state, *stats_); }

private:
    std::shared_ptr<const HeroStats> stats_;
};

class AssociationRuleStrategy final : public Strategy {
public:
    AssociationRuleStrategy(std::shared_ptr<const RuleSet> rules, std::shared_ptr<const HeroStats> stats,
                            std::size_t pool_cap = 5)
        : rules_(std::move(rules)), stats_(std::move(stats)), pool_cap_(pool_cap) {}
    std::string name() const override;
    HeroId recommend(const DraftState& state, Rng& rng) const override {
        return ar_recommend(state, *rules_, *stats_, rng, pool_cap_).hero;
    }

private:
    std::shared_ptr<const RuleSet> rules_;
    std::shared_ptr<const HeroStats> stats_;
    std::size_t pool_cap_;
};

/// Fresh tree per call, seeded from the caller's generator.
class UctStrategy final : public Strategy {
public:
    UctStrategy(std::shared_ptr<const RewardFunction> reward, UctConfig config)
        : reward_(std::move(reward)), config_(config) {}
    std::string name() const override;
    HeroId recommend(const DraftState& state, Rng& rng) const override;
    const UctConfig& config() const { return config_; }

private:
    std::shared_ptr<const RewardFunction> reward_;
    UctConfig config_;
};

/// Shared inputs for building strategies from text specs.
struct StrategyContext {
    std::shared_ptr<const RewardFunction> reward;
    std::shared_ptr<const HeroStats> stats;
    std::shared_ptr<const RuleSet> rules;
};

/// Decimal or `2^k`.
double parse_exploration_constant(std::string_view s);

/// Spec grammar `name[:param[:param]]`:
///   rd | hwr | ar[:pool_cap] | uct[:iterations[:c]]
/// c accepts decimals or powers of two written `2^k` (e.g. `2^-1`).
/// Defaults: ar pool 5; uct 1600 iterations, c 0.5.
std::unique_ptr<Strategy> make_strategy(std::string_view spec, const StrategyContext& context);

}  // namespace herodraft
