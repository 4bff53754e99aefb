#pragma once

// Paired, seeded draft simulations between strategies: single drafts,
// side-swapped tournaments and exploration-constant sweeps.

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "herodraft/strategy.hpp"

namespace herodraft {

struct SimulationConfig {
    std::shared_ptr<const DraftSchedule> schedule;
    std::shared_ptr<const RewardFunction> reward;
    std::size_t n_simulations = 1000;
    std::uint64_t base_seed = 0;
    /// First half: strategy A is Radiant; second half replays the same seeds
    /// with B as Radiant.
    bool swap_sides = true;
    /// Sampling weights for the draft's first action (hero pick frequency).
    /// Empty or all-zero means uniform.
    std::vector<double> first_action_weights;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

struct SimulationOutcome {
    DraftState final_state;
    double radiant_win_prob = 0.0;
    std::vector<HeroId> actions;
    /// Wall time of each strategy call, indexed by step; step 0 is sampled by
    /// the harness and recorded as 0.
    std::vector<double> step_millis;
};

/// One draft. Generator streams are derived from `seed`: stream 0 drives the
/// harness's first action, streams 1 and 2 feed the Radiant and Dire
/// strategies. ProtocolError if a strategy returns an illegal hero.
SimulationOutcome simulate_draft(const Strategy& radiant, const Strategy& dire,
                                 const SimulationConfig& config, std::uint64_t seed);

/// Per-simulation seed; swapped pairs share one.
std::uint64_t simulation_seed(const SimulationConfig& config, std::size_t index);

struct TimingStats {
    std::size_t calls = 0;
    double mean_ms = 0.0;
    double max_ms = 0.0;
};

struct SimulationTrace {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool a_is_radiant = true;
    std::vector<HeroId> actions;
    double radiant_win_prob = 0.0;
};

struct TournamentResult {
    std::string label_a;
    std::string label_b;
    /// Mean over simulations of A's predicted win rate.
    double mean_win_rate_a = 0.0;
    std::vector<SimulationTrace> per_simulation;
    TimingStats timing_a;
    TimingStats timing_b;
    bool valid = true;
    std::string error;

    double mean_win_rate_b() const { return 1.0 - mean_win_rate_a; }
};

TournamentResult run_tournament(const Strategy& a, const Strategy& b, const SimulationConfig& config);

struct SweepResult {
    std::vector<std::uint64_t> iterations;
    std::vector<double> c_values;
    double benchmark_c = 1.0;
    /// win_rate[i][j]: UCT(iterations[i], benchmark_c) against UCT(iterations[i], c_values[j]).
    std::vector<std::vector<double>> win_rate;
    /// Per row, the c that holds the benchmark to its lowest win rate.
    std::vector<double> best_c;
};

SweepResult sweep_exploration(const std::vector<std::uint64_t>& iterations, const std::vector<double>& c_values,
                              const SimulationConfig& config, double benchmark_c = 1.0);

/// Square matrix CSV; cell (row, col) is the row strategy's win rate.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<std::vector<double>>& matrix);
void write_tournament_csv(std::ostream& out, const TournamentResult& result);
nlohmann::json tournament_to_json(const TournamentResult& result, bool include_traces = true);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
nlohmann::json sweep_to_json(const SweepResult& sweep);

}  // namespace herodraft
