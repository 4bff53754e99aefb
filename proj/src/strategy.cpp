#include "herodraft/strategy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "herodraft/error.hpp"

namespace herodraft {

namespace {

void require_turn(const DraftState& state) {
    if (state.is_terminal()) throw QueryError("no recommendation for a completed draft");
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

bool contains(const std::vector<HeroId>& sorted, HeroId h) {
    return std::binary_search(sorted.begin(), sorted.end(), h);
}

}  // namespace

HeroId rd_recommend(const DraftState& state, Rng& rng) {
    require_turn(state);
    const auto legal = state.legal_actions();
    return legal[uniform_index(rng, legal.size())];
}

HeroId hwr_recommend(const DraftState& state, const HeroStats& stats) {
    require_turn(state);
    const auto legal = state.legal_actions();
    HeroId best = legal.front();
    double best_rate = stats.win_rate(best);
    for (HeroId h : legal) {
        if (const double r = stats.win_rate(h); r > best_rate) {
            best = h;
            best_rate = r;
        }
    }
    return best;
}

ArDecision ar_recommend(const DraftState& state, const RuleSet& rules, const HeroStats& stats, Rng& rng,
                        std::size_t pool_cap) {
    require_turn(state);
    const Turn t = state.turn();
    const Team perspective = t.kind == ActionKind::Ban ? opponent(t.team) : t.team;
    const auto own = state.picks(perspective);
    const auto opp = state.picks(opponent(perspective));

    std::map<HeroId, double> ally_best;
    std::map<HeroId, double> enemy_best;
    auto keep_max = [](std::map<HeroId, double>& m, HeroId h, double v) {
        auto [it, inserted] = m.try_emplace(h, v);
        if (!inserted) it->second = std::max(it->second, v);
    };
    for (const auto& rule : rules.rules) {
        if (rule.kind == RuleKind::Ally) {
            // Exactly one member missing from our side, and it is still available.
            std::size_t missing = 0;
            HeroId candidate = 0;
            for (HeroId h : rule.heroes) {
                if (contains(own, h)) continue;
                ++missing;
                candidate = h;
            }
            if (missing == 1 && state.is_legal(candidate)) keep_max(ally_best, candidate, rule.win_rate);
        } else {
            if (!state.is_legal(rule.target)) continue;
            const bool applies = std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                                             [&](HeroId h) { return contains(opp, h); });
            if (applies) keep_max(enemy_best, rule.target, rule.confidence);
        }
    }

    auto top = [&](const std::map<HeroId, double>& m) {
        std::vector<std::pair<HeroId, double>> v(m.begin(), m.end());
        std::sort(v.begin(), v.end(), [&](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            const double ra = stats.win_rate(a.first);
            const double rb = stats.win_rate(b.first);
            if (ra != rb) return ra > rb;
            return a.first < b.first;
        });
        if (v.size() > pool_cap) v.resize(pool_cap);
        return v;
    };

    ArDecision d;
    for (const auto& [h, _] : top(ally_best)) d.pool.push_back(h);
    for (const auto& [h, _] : top(enemy_best)) d.pool.push_back(h);
    std::sort(d.pool.begin(), d.pool.end());
    d.pool.erase(std::unique(d.pool.begin(), d.pool.end()), d.pool.end());
    if (d.pool.empty()) {
        d.fallback = true;
        d.hero = rd_recommend(state, rng);
    } else {
        d.hero = d.pool[uniform_index(rng, d.pool.size())];
    }
    return d;
}

std::string AssociationRuleStrategy::name() const {
    return pool_cap_ == 5 ? "ar" : "ar:" + std::to_string(pool_cap_);
}

std::string UctStrategy::name() const {
    return "uct:" + std::to_string(config_.budget.amount) + ":" + format_number(config_.exploration_c);
}

HeroId UctStrategy::recommend(const DraftState& state, Rng& rng) const {
    UctConfig cfg = config_;
    cfg.seed = rng();
    return search(state, *reward_, cfg).best;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::uint64_t parse_count(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v == 0) {
        throw ConfigError("invalid " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

double parse_exploration_constant(std::string_view s) {
    std::string str(s);
    try {
        std::size_t used = 0;
        double v;
        if (str.rfind("2^", 0) == 0) {
            v = std::ldexp(1.0, std::stoi(str.substr(2), &used));
            used += 2;
        } else {
            v = std::stod(str, &used);
        }
        if (used != str.size() || !(v >= 0)) throw std::invalid_argument("c");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid exploration constant '" + str + "'");
    }
}

std::unique_ptr<Strategy> make_strategy(std::string_view spec, const StrategyContext& context) {
    const auto parts = split(spec, ':');
    const auto name = parts[0];
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError("strategy '" + std::string(spec) + "' needs " + what);
    };
    if (name == "rd") {
        need(parts.size() == 1, "no parameters");
        return std::make_unique<RandomStrategy>();
    }
    if (name == "hwr") {
        need(parts.size() == 1, "no parameters");
        need(context.stats != nullptr, "hero statistics (--data)");
        return std::make_unique<HighestWinRateStrategy>(context.stats);
    }
    if (name == "ar") {
        need(parts.size() <= 2, "at most one parameter");
        need(context.rules != nullptr && context.stats != nullptr, "mined rules (--data or --rules)");
        const std::size_t cap = parts.size() == 2 ? parse_count(parts[1], "pool cap") : 5;
        return std::make_unique<AssociationRuleStrategy>(context.rules, context.stats, cap);
    }
    if (name == "uct") {
        need(parts.size() <= 3, "at most two parameters");
        need(context.reward != nullptr, "a reward model (--model)");
        UctConfig cfg;
        cfg.budget = SearchBudget::iterations(parts.size() >= 2 ? parse_count(parts[1], "iterations") : 1600);
        cfg.exploration_c = parts.size() == 3 ? parse_exploration_constant(parts[2]) : 0.5;
        return std::make_unique<UctStrategy>(context.reward, cfg);
    }
    throw ConfigError("unknown strategy '" + std::string(spec) + "'");
}

}  // namespace herodraft
