#pragma once

// UCT recommender: UCB1 selection, random expansion, uniform random
// roll-outs and reward backpropagation under an anytime budget.

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "herodraft/draft.hpp"
#include "herodraft/random.hpp"
#include "herodraft/reward.hpp"

namespace herodraft {

struct SearchBudget {
    enum class Kind { Iterations, WallClock };

    Kind kind = Kind::Iterations;
    std::uint64_t amount = 1600;  // iterations or milliseconds

    static SearchBudget iterations(std::uint64_t n);
    static SearchBudget wall_clock(std::chrono::milliseconds ms);
};

struct UctConfig {
    double exploration_c = 0.5;
    SearchBudget budget{};
    std::uint64_t seed = 0;
    /// Stop growing the tree once it holds this many nodes; 0 disables.
    std::size_t max_nodes = 0;
    /// Hard wall-clock cap applied on top of an iteration budget; 0 disables.
    std::chrono::milliseconds time_cap{0};

    void validate() const;
};

/// w + c * sqrt(ln(parent_visits) / edge_visits). Unvisited edges have no
/// score; passing edge_visits == 0 throws QueryError.
double ucb1_score(double mean_reward, std::uint64_t parent_visits, std::uint64_t edge_visits, double c);

/// Statistics of one root edge. mean_reward is from the acting team's view.
struct EdgeStats {
    HeroId hero = 0;
    std::uint64_t visits = 0;
    double mean_reward = 0.0;
};

struct SearchStats {
    std::uint64_t iterations = 0;
    std::uint64_t expansions = 0;
    std::uint64_t terminal_hits = 0;   // iterations whose selection ended at a terminal node
    std::uint64_t selections = 0;      // UCB1 selection steps anywhere in the tree
    std::uint64_t root_selections = 0; // UCB1 selection steps taken at the root
    std::size_t nodes = 0;
    double elapsed_ms = 0.0;
    bool stopped_by_time_cap = false;
    bool stopped_by_node_cap = false;
};

struct SearchResult {
    HeroId best = 0;
    Team actor = Team::Radiant;
    std::vector<EdgeStats> root_edges;  // expanded edges, increasing hero id
    std::uint64_t root_visits = 0;
    double root_value_radiant = 0.0;    // mean backed-up w over all iterations
    SearchStats stats;

    const EdgeStats* edge(HeroId h) const;
};

/// One search tree. Each node's statistics describe the edge leading into it:
/// visit count n(s,a) and the summed reward of the team that took that action
/// (w for Radiant, 1 - w for Dire). A node's visit count includes the
/// iteration that created it.
class UctSearch {
public:
    struct Node {
        HeroId action = 0;
        Team actor = Team::Radiant;
        std::int32_t parent = -1;
        bool terminal = false;
        std::uint64_t visits = 0;
        double reward_sum = 0.0;
        std::vector<std::int32_t> children;
        std::vector<HeroId> unexpanded;

        double mean() const { return visits ? reward_sum / static_cast<double>(visits) : 0.0; }
    };

    UctSearch(const RewardFunction& reward, UctConfig config);

    /// Builds a fresh tree from `root`. QueryError for terminal roots.
    SearchResult run(const DraftState& root);

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    void iterate(const DraftState& root);
    std::int32_t select_child(std::int32_t node);

    const RewardFunction& reward_;
    UctConfig config_;
    Rng rng_;
    std::vector<Node> nodes_;
    std::optional<DraftState> scratch_;
    std::vector<std::int32_t> path_;
    std::vector<HeroId> avail_;
    std::vector<std::int32_t> ties_;
    double root_radiant_sum_ = 0.0;
    SearchStats stats_;
};

SearchResult search(const DraftState& state, const RewardFunction& reward, const UctConfig& config);
HeroId recommend(const DraftState& state, const RewardFunction& reward, const UctConfig& config);

}  // namespace herodraft
