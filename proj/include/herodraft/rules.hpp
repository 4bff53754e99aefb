#pragma once

// Ally / enemy association rules mined level-wise (Apriori) from line-ups.

#include <string>
#include <string_view>
#include <vector>

#include "herodraft/dataset.hpp"

namespace herodraft {

enum class RuleKind { Ally, Enemy };

std::string_view to_string(RuleKind k);

/// Ally: `heroes` appeared together on one side; win_rate is that side's win
/// fraction over those appearances.
/// Enemy: `antecedent` sat on one side and `target` on the other; confidence
/// is the fraction of those matches won by the target's side.
struct AssociationRule {
    RuleKind kind = RuleKind::Ally;
    std::vector<HeroId> heroes;      // sorted; for Enemy: antecedent plus target
    std::vector<HeroId> antecedent;  // Enemy only, sorted
    HeroId target = 0;               // Enemy only
    double support = 0.0;
    double win_rate = 0.0;
    double confidence = 0.0;

    friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct RuleSet {
    double min_support = 0.0;
    std::size_t max_rule_size = 3;
    std::vector<AssociationRule> rules;
};

/// Rules over sets of 2..max_rule_size heroes whose support (fraction of
/// matches) is at least min_support. Output is sorted: ally before enemy,
/// then by hero list and target.
RuleSet mine_rules(const MatchDataset& dataset, double min_support, std::size_t max_rule_size = 3);

nlohmann::json rules_to_json(const RuleSet& rules);
RuleSet rules_from_json(const nlohmann::json& j);
void save_rules(const RuleSet& rules, const std::string& path);
RuleSet load_rules(const std::string& path);

}  // namespace herodraft
