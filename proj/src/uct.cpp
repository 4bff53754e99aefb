#include "herodraft/uct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "herodraft/error.hpp"

namespace herodraft {

SearchBudget SearchBudget::iterations(std::uint64_t n) { return {Kind::Iterations, n}; }

SearchBudget SearchBudget::wall_clock(std::chrono::milliseconds ms) {
    return {Kind::WallClock, static_cast<std::uint64_t>(ms.count())};
}

void UctConfig::validate() const {
    if (!(exploration_c >= 0)) throw ConfigError("exploration constant must be non-negative");
    if (budget.amount < 1) throw ConfigError("search budget must be at least 1");
    if (time_cap.count() < 0) throw ConfigError("time cap must be non-negative");
}

double ucb1_score(double mean_reward, std::uint64_t parent_visits, std::uint64_t edge_visits, double c) {
    if (edge_visits == 0) throw QueryError("UCB1 is undefined for an unvisited edge");
    if (parent_visits == 0) throw QueryError("UCB1 needs a visited parent");
    return mean_reward +
           c * std::sqrt(std::log(static_cast<double>(parent_visits)) / static_cast<double>(edge_visits));
}

const EdgeStats* SearchResult::edge(HeroId h) const {
    for (const auto& e : root_edges) {
        if (e.hero == h) return &e;
    }
    return nullptr;
}

UctSearch::UctSearch(const RewardFunction& reward, UctConfig config)
    : reward_(reward), config_(config), rng_(config.seed) {
    config_.validate();
}

SearchResult UctSearch::run(const DraftState& root) {
    if (root.is_terminal()) throw QueryError("cannot search from a completed draft");
    if (root.n_heroes() != reward_.n_features()) {
        throw DataError("reward expects " + std::to_string(reward_.n_features()) +
                        " heroes, draft has " + std::to_string(root.n_heroes()));
    }

    rng_.seed(config_.seed);
    nodes_.clear();
    stats_ = {};
    root_radiant_sum_ = 0.0;
    scratch_.emplace(root);

    Node root_node;
    root_node.unexpanded = root.legal_actions();
    if (root_node.unexpanded.empty()) throw QueryError("no legal actions");
    nodes_.push_back(std::move(root_node));

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double, std::milli>(Clock::now() - start).count(); };
    const bool by_time = config_.budget.kind == SearchBudget::Kind::WallClock;
    const double cap_ms = static_cast<double>(config_.time_cap.count());

    while (true) {
        if (stats_.iterations >= 1) {
            if (!by_time && stats_.iterations >= config_.budget.amount) break;
            const double t = elapsed();
            if (by_time && t >= static_cast<double>(config_.budget.amount)) break;
            if (cap_ms > 0 && t >= cap_ms) {
                stats_.stopped_by_time_cap = true;
                break;
            }
            if (config_.max_nodes > 0 && nodes_.size() >= config_.max_nodes) {
                stats_.stopped_by_node_cap = true;
                break;
            }
        }
        iterate(root);
    }
    stats_.elapsed_ms = elapsed();
    stats_.nodes = nodes_.size();

    SearchResult result;
    result.actor = root.turn().team;
    result.root_visits = nodes_[0].visits;
    result.root_value_radiant = root_radiant_sum_ / static_cast<double>(nodes_[0].visits);
    for (std::int32_t c : nodes_[0].children) {
        const Node& n = nodes_[static_cast<std::size_t>(c)];
        result.root_edges.push_back({n.action, n.visits, n.mean()});
    }
    std::sort(result.root_edges.begin(), result.root_edges.end(),
              [](const EdgeStats& a, const EdgeStats& b) { return a.hero < b.hero; });

    // Highest mean reward among visited root edges; random among ties.
    double best = -std::numeric_limits<double>::infinity();
    std::vector<HeroId> tied;
    for (const auto& e : result.root_edges) {
        if (e.visits == 0) continue;
        if (e.mean_reward > best) {
            best = e.mean_reward;
            tied.assign(1, e.hero);
        } else if (e.mean_reward == best) {
            tied.push_back(e.hero);
        }
    }
    result.best = tied.size() == 1 ? tied[0] : tied[uniform_index(rng_, tied.size())];
    result.stats = stats_;
    return result;
}

std::int32_t UctSearch::select_child(std::int32_t node) {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    const double log_parent = std::log(static_cast<double>(n.visits));
    const double c = config_.exploration_c;
    double best = -std::numeric_limits<double>::infinity();
    ties_.clear();
    for (std::int32_t ci : n.children) {
        const Node& ch = nodes_[static_cast<std::size_t>(ci)];
        const double v = static_cast<double>(ch.visits);
        // Same value as ucb1_score(), with the parent logarithm hoisted.
        const double score = ch.reward_sum / v + c * std::sqrt(log_parent / v);
        if (score > best) {
            best = score;
            ties_.assign(1, ci);
        } else if (score == best) {
            ties_.push_back(ci);
        }
    }
    return ties_.size() == 1 ? ties_[0] : ties_[uniform_index(rng_, ties_.size())];
}

void UctSearch::iterate(const DraftState& root) {
    DraftState& state = *scratch_;
    state = root;
    path_.clear();
    std::int32_t node = 0;
    path_.push_back(node);

    // Selection: descend through fully expanded non-terminal nodes.
    while (!nodes_[static_cast<std::size_t>(node)].terminal &&
           nodes_[static_cast<std::size_t>(node)].unexpanded.empty()) {
        node = select_child(node);
        ++stats_.selections;
        if (path_.size() == 1) ++stats_.root_selections;
        state.advance(nodes_[static_cast<std::size_t>(node)].action);
        path_.push_back(node);
    }

    if (nodes_[static_cast<std::size_t>(node)].terminal) {
        ++stats_.terminal_hits;
    } else {
        // Expansion: one unvisited action, uniformly at random.
        auto& unexpanded = nodes_[static_cast<std::size_t>(node)].unexpanded;
        const std::size_t pick = uniform_index(rng_, unexpanded.size());
        const HeroId action = unexpanded[pick];
        unexpanded[pick] = unexpanded.back();
        unexpanded.pop_back();

        Node child;
        child.action = action;
        child.actor = state.turn().team;
        child.parent = node;
        state.advance(action);
        child.terminal = state.is_terminal();
        if (!child.terminal) child.unexpanded = state.legal_actions();
        const auto child_index = static_cast<std::int32_t>(nodes_.size());
        nodes_[static_cast<std::size_t>(node)].children.push_back(child_index);
        nodes_.push_back(std::move(child));
        path_.push_back(child_index);
        ++stats_.expansions;

        // Simulation: uniform random roll-out to the end of the draft.
        if (!state.is_terminal()) {
            avail_ = state.legal_actions();
            while (!state.is_terminal()) {
                const std::size_t i = uniform_index(rng_, avail_.size());
                state.advance(avail_[i]);
                avail_[i] = avail_.back();
                avail_.pop_back();
            }
        }
    }

    // Backpropagation from the expanded (or terminal) node to the root.
    const double w = reward_.evaluate(state);
    for (std::int32_t idx : path_) {
        Node& n = nodes_[static_cast<std::size_t>(idx)];
        ++n.visits;
        if (idx != 0) n.reward_sum += team_reward(n.actor, w);
    }
    root_radiant_sum_ += w;
    ++stats_.iterations;
}

SearchResult search(const DraftState& state, const RewardFunction& reward, const UctConfig& config) {
    UctSearch s(reward, config);
    return s.run(state);
}

HeroId recommend(const DraftState& state, const RewardFunction& reward, const UctConfig& config) {
    return search(state, reward, config).best;
}

}  // namespace herodraft
