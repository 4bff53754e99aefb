#pragma once

// Known ground-truth win model used to synthesise match data and to score
// drafts exactly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "herodraft/dataset.hpp"
#include "herodraft/reward.hpp"

namespace herodraft {

/// Radiant logit = sum base(R) - sum base(D)
///               + sum_{pairs in R} synergy - sum_{pairs in D} synergy
///               + sum_{r in R, d in D} opposition(r, d)
/// and P(Radiant wins) = sigmoid(logit / noise_scale).
struct GroundTruthModel {
    std::size_t n_heroes = 0;
    std::vector<double> base;        // n
    std::vector<double> synergy;     // n*n, symmetric, zero diagonal
    std::vector<double> opposition;  // n*n, antisymmetric
    double noise_scale = 1.0;
    std::uint64_t seed = 0;

    double synergy_at(HeroId i, HeroId j) const { return synergy[i * n_heroes + j]; }
    double opposition_at(HeroId r, HeroId d) const { return opposition[r * n_heroes + d]; }
    void set_synergy(HeroId i, HeroId j, double v);
    /// Sets opposition(r, d) = v and opposition(d, r) = -v.
    void set_opposition(HeroId r, HeroId d, double v);

    double logit(std::span<const HeroId> radiant, std::span<const HeroId> dire) const;
    double win_prob(std::span<const HeroId> radiant, std::span<const HeroId> dire) const;

    /// Throws ConfigError on shape or symmetry violations.
    void validate() const;
};

GroundTruthModel zero_truth(std::size_t n_heroes);

struct RandomTruthConfig {
    std::size_t n_heroes = 20;
    double base_range = 0.3;        // base ~ uniform(-r, r)
    std::size_t synergy_pairs = 10;
    std::size_t opposition_pairs = 10;
    double pair_strength = 1.0;     // each pair gets +/- strength
    double noise_scale = 1.0;
};

GroundTruthModel random_truth(const RandomTruthConfig& config, std::uint64_t seed);

nlohmann::json truth_to_json(const GroundTruthModel& truth);
GroundTruthModel truth_from_json(const nlohmann::json& j);
GroundTruthModel load_truth(const std::string& path);
void save_truth(const GroundTruthModel& truth, const std::string& path);

/// Uniformly random disjoint line-ups labelled by Bernoulli(win_prob).
MatchDataset synth_generate(const GroundTruthModel& truth, std::size_t n_matches, std::uint64_t seed);

/// Exact win probability of a terminal draft; QueryError otherwise.
double true_win_prob(const GroundTruthModel& truth, const DraftState& terminal);

/// The ground truth seen through the reward interface.
class TruthReward final : public RewardFunction {
public:
    explicit TruthReward(GroundTruthModel truth) : truth_(std::move(truth)) {}

    std::size_t n_features() const override { return truth_.n_heroes; }
    double evaluate(const DraftState& terminal) const override { return true_win_prob(truth_, terminal); }
    const GroundTruthModel& truth() const { return truth_; }

private:
    GroundTruthModel truth_;
};

}  // namespace herodraft
