#include "herodraft/rules.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "herodraft/error.hpp"

namespace herodraft {

namespace {

// Hero sets are packed 12 bits per member (id + 1), sorted ascending; an
// enemy rule's target lives in the top slot.
constexpr int kBits = 12;
constexpr std::size_t kMaxPool = (1u << kBits) - 1;
constexpr std::size_t kMaxRuleSize = 5;

using Key = std::uint64_t;

Key pack(const std::vector<HeroId>& sorted) {
    Key k = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) k |= Key{sorted[i] + 1u} << (kBits * i);
    return k;
}

Key pack_enemy(const std::vector<HeroId>& antecedent, HeroId target) {
    return pack(antecedent) | (Key{target + 1u} << (kBits * 4));
}

struct Count {
    std::uint64_t hits = 0;
    std::uint64_t wins = 0;
};

// Calls f(subset) for every k-subset of `items` (which must be sorted).
template <typename F>
void for_each_subset(const std::vector<HeroId>& items, std::size_t k, F&& f) {
    if (k > items.size()) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<HeroId> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
        f(subset);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == items.size() - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Joins sorted (k-1)-sets sharing their first k-2 members; keeps a candidate
// only if every (k-1)-subset is in `frequent`.
std::vector<std::vector<HeroId>> apriori_join(const std::vector<std::vector<HeroId>>& level,
                                              const std::unordered_set<Key>& frequent) {
    std::vector<std::vector<HeroId>> out;
    for (std::size_t a = 0; a < level.size(); ++a) {
        for (std::size_t b = a + 1; b < level.size(); ++b) {
            const auto& x = level[a];
            const auto& y = level[b];
            if (!std::equal(x.begin(), x.end() - 1, y.begin(), y.end() - 1)) continue;
            std::vector<HeroId> cand = x;
            cand.push_back(y.back());
            std::sort(cand.begin(), cand.end());
            bool ok = true;
            for (std::size_t drop = 0; drop < cand.size() && ok; ++drop) {
                std::vector<HeroId> sub;
                for (std::size_t i = 0; i < cand.size(); ++i) {
                    if (i != drop) sub.push_back(cand[i]);
                }
                ok = frequent.count(pack(sub)) > 0;
            }
            if (ok) out.push_back(std::move(cand));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::string_view to_string(RuleKind k) { return k == RuleKind::Ally ? "ally" : "enemy"; }

RuleSet mine_rules(const MatchDataset& dataset, double min_support, std::size_t max_rule_size) {
    if (dataset.empty()) throw DataError("cannot mine rules from an empty dataset");
    if (!(min_support > 0 && min_support <= 1)) throw ConfigError("min_support must lie in (0, 1]");
    if (max_rule_size < 2 || max_rule_size > kMaxRuleSize) {
        throw ConfigError("max_rule_size must lie in [2, 5]");
    }
    if (dataset.n_heroes > kMaxPool) throw ConfigError("hero pool too large for rule mining");

    const double n = static_cast<double>(dataset.size());
    auto frequent = [&](std::uint64_t hits) { return static_cast<double>(hits) / n >= min_support; };

    struct Side {
        std::vector<HeroId> heroes;  // sorted
        bool won;
    };
    std::vector<std::pair<Side, Side>> matches;
    matches.reserve(dataset.size());
    for (const auto& r : dataset.records) {
        Side rad{{r.radiant.begin(), r.radiant.end()}, r.radiant_win};
        Side dire{{r.dire.begin(), r.dire.end()}, !r.radiant_win};
        std::sort(rad.heroes.begin(), rad.heroes.end());
        std::sort(dire.heroes.begin(), dire.heroes.end());
        matches.emplace_back(std::move(rad), std::move(dire));
    }

    RuleSet out;
    out.min_support = min_support;
    out.max_rule_size = max_rule_size;

    // Ally itemsets, level by level.
    std::unordered_set<Key> frequent_sets;
    std::vector<std::vector<HeroId>> level;
    {
        std::vector<std::uint64_t> single(dataset.n_heroes, 0);
        for (const auto& [r, d] : matches) {
            for (HeroId h : r.heroes) ++single[h];
            for (HeroId h : d.heroes) ++single[h];
        }
        for (HeroId h = 0; h < single.size(); ++h) {
            if (frequent(single[h])) {
                level.push_back({h});
                frequent_sets.insert(pack({h}));
            }
        }
    }
    std::map<std::size_t, std::vector<std::vector<HeroId>>> ally_levels;
    ally_levels[1] = level;
    for (std::size_t k = 2; k <= max_rule_size && !level.empty(); ++k) {
        auto candidates = apriori_join(level, frequent_sets);
        std::unordered_map<Key, Count> counts;
        for (const auto& c : candidates) counts.emplace(pack(c), Count{});
        for (const auto& [r, d] : matches) {
            for (const Side* side : {&r, &d}) {
                for_each_subset(side->heroes, k, [&](const std::vector<HeroId>& s) {
                    auto it = counts.find(pack(s));
                    if (it == counts.end()) return;
                    ++it->second.hits;
                    it->second.wins += side->won;
                });
            }
        }
        level.clear();
        for (const auto& c : candidates) {
            const Count& cnt = counts.at(pack(c));
            if (!frequent(cnt.hits)) continue;
            level.push_back(c);
            frequent_sets.insert(pack(c));
            AssociationRule rule;
            rule.kind = RuleKind::Ally;
            rule.heroes = c;
            rule.support = static_cast<double>(cnt.hits) / n;
            rule.win_rate = static_cast<double>(cnt.wins) / static_cast<double>(cnt.hits);
            out.rules.push_back(std::move(rule));
        }
        ally_levels[k] = level;
    }

    // Enemy rules X => y with |X| = 1 .. max_rule_size - 1.
    // by_target[y] holds the frequent antecedents of the previous level.
    std::map<HeroId, std::vector<std::vector<HeroId>>> by_target;
    std::unordered_set<Key> frequent_enemy;
    for (std::size_t k = 1; k + 1 <= max_rule_size; ++k) {
        std::unordered_map<Key, Count> counts;
        std::vector<std::pair<std::vector<HeroId>, HeroId>> candidates;
        if (k == 1) {
            for (const auto& [r, d] : matches) {
                for (const auto& [own, other] : {std::pair{&r, &d}, std::pair{&d, &r}}) {
                    for (HeroId x : own->heroes) {
                        for (HeroId y : other->heroes) {
                            auto [it, inserted] = counts.try_emplace(pack_enemy({x}, y));
                            if (inserted) candidates.push_back({{x}, y});
                            ++it->second.hits;
                            it->second.wins += other->won;
                        }
                    }
                }
            }
            std::sort(candidates.begin(), candidates.end());
        } else {
            for (const auto& [y, antecedents] : by_target) {
                std::unordered_set<Key> ok;
                for (const auto& a : antecedents) ok.insert(pack(a));
                for (auto& x : apriori_join(antecedents, ok)) {
                    // The antecedent itself must be a frequent one-side set.
                    if (!frequent_sets.count(pack(x))) continue;
                    if (std::binary_search(x.begin(), x.end(), y)) continue;
                    counts.emplace(pack_enemy(x, y), Count{});
                    candidates.push_back({std::move(x), y});
                }
            }
            for (const auto& [r, d] : matches) {
                for (const auto& [own, other] : {std::pair{&r, &d}, std::pair{&d, &r}}) {
                    for_each_subset(own->heroes, k, [&](const std::vector<HeroId>& x) {
                        for (HeroId y : other->heroes) {
                            auto it = counts.find(pack_enemy(x, y));
                            if (it == counts.end()) continue;
                            ++it->second.hits;
                            it->second.wins += other->won;
                        }
                    });
                }
            }
        }
        by_target.clear();
        for (auto& [x, y] : candidates) {
            const Count& cnt = counts.at(pack_enemy(x, y));
            if (!frequent(cnt.hits)) continue;
            by_target[y].push_back(x);
            AssociationRule rule;
            rule.kind = RuleKind::Enemy;
            rule.antecedent = x;
            rule.target = y;
            rule.heroes = x;
            rule.heroes.push_back(y);
            std::sort(rule.heroes.begin(), rule.heroes.end());
            rule.support = static_cast<double>(cnt.hits) / n;
            rule.confidence = static_cast<double>(cnt.wins) / static_cast<double>(cnt.hits);
            out.rules.push_back(std::move(rule));
        }
        for (auto& [y, list] : by_target) std::sort(list.begin(), list.end());
        if (by_target.empty()) break;
    }

    std::sort(out.rules.begin(), out.rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
        if (a.kind != b.kind) return a.kind == RuleKind::Ally;
        if (a.heroes != b.heroes) return a.heroes < b.heroes;
        return a.target < b.target;
    });
    return out;
}

nlohmann::json rules_to_json(const RuleSet& rules) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rules.rules) {
        nlohmann::json j = {{"kind", to_string(r.kind)}, {"heroes", r.heroes}, {"support", r.support}};
        if (r.kind == RuleKind::Ally) {
            j["win_rate"] = r.win_rate;
        } else {
            j["antecedent"] = r.antecedent;
            j["target"] = r.target;
            j["confidence"] = r.confidence;
        }
        arr.push_back(std::move(j));
    }
    return {{"format_version", 1},
            {"min_support", rules.min_support},
            {"max_rule_size", rules.max_rule_size},
            {"rules", arr}};
}

RuleSet rules_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<int>() != 1) throw DataError("unsupported rules format_version");
        RuleSet out;
        out.min_support = j.at("min_support").get<double>();
        out.max_rule_size = j.at("max_rule_size").get<std::size_t>();
        for (const auto& e : j.at("rules")) {
            AssociationRule r;
            const auto kind = e.at("kind").get<std::string>();
            if (kind != "ally" && kind != "enemy") throw DataError("unknown rule kind " + kind);
            r.kind = kind == "ally" ? RuleKind::Ally : RuleKind::Enemy;
            r.heroes = e.at("heroes").get<std::vector<HeroId>>();
            r.support = e.at("support").get<double>();
            if (r.kind == RuleKind::Ally) {
                r.win_rate = e.at("win_rate").get<double>();
            } else {
                r.antecedent = e.at("antecedent").get<std::vector<HeroId>>();
                r.target = e.at("target").get<HeroId>();
                r.confidence = e.at("confidence").get<double>();
            }
            out.rules.push_back(std::move(r));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed rules file: ") + e.what());
    }
}

void save_rules(const RuleSet& rules, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write rules file " + path);
    out << rules_to_json(rules).dump(1) << '\n';
}

RuleSet load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open rules file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return rules_from_json(j);
}

}  // namespace herodraft
