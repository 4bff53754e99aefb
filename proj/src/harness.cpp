#include "herodraft/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "herodraft/error.hpp"

namespace herodraft {

void SimulationConfig::validate() const {
    if (!schedule) throw ConfigError("simulation needs a schedule");
    if (!reward) throw ConfigError("simulation needs a reward model");
    if (reward->n_features() != schedule->n_heroes()) {
        throw ConfigError("reward model expects " + std::to_string(reward->n_features()) +
                          " heroes, schedule has " + std::to_string(schedule->n_heroes()));
    }
    if (n_simulations < 1) throw ConfigError("need at least one simulation");
    if (swap_sides && n_simulations % 2 != 0) {
        throw ConfigError("side swapping needs an even number of simulations");
    }
    if (!first_action_weights.empty() && first_action_weights.size() != schedule->n_heroes()) {
        throw ConfigError("first-action weights must cover every hero");
    }
}

std::uint64_t simulation_seed(const SimulationConfig& config, std::size_t index) {
    const std::size_t pair = config.swap_sides ? index % (config.n_simulations / 2) : index;
    return derive_seed(config.base_seed, pair);
}

SimulationOutcome simulate_draft(const Strategy& radiant, const Strategy& dire,
                                 const SimulationConfig& config, std::uint64_t seed) {
    Rng first_rng(derive_seed(seed, 0));
    Rng radiant_rng(derive_seed(seed, 1));
    Rng dire_rng(derive_seed(seed, 2));

    SimulationOutcome out{new_draft(config.schedule), 0.0, {}, {}};
    DraftState& state = out.final_state;
    while (!state.is_terminal()) {
        HeroId hero;
        double ms = 0.0;
        if (state.step() == 0) {
            const auto& w = config.first_action_weights;
            const bool weighted = std::any_of(w.begin(), w.end(), [](double x) { return x > 0; });
            hero = weighted ? static_cast<HeroId>(weighted_index(first_rng, w))
                            : static_cast<HeroId>(uniform_index(first_rng, state.n_heroes()));
        } else {
            const bool is_radiant = state.turn().team == Team::Radiant;
            const Strategy& s = is_radiant ? radiant : dire;
            const auto t0 = std::chrono::steady_clock::now();
            hero = s.recommend(state, is_radiant ? radiant_rng : dire_rng);
            ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            if (!state.is_legal(hero)) {
                throw ProtocolError(s.name(), state.step(),
                                    "strategy " + s.name() + " chose illegal hero " + std::to_string(hero) +
                                        " at step " + std::to_string(state.step()));
            }
        }
        state.advance(hero);
        out.actions.push_back(hero);
        out.step_millis.push_back(ms);
    }
    out.radiant_win_prob = config.reward->evaluate(state);
    return out;
}

namespace {

struct SimSlot {
    std::optional<SimulationOutcome> outcome;
    bool a_is_radiant = true;
    std::uint64_t seed = 0;
    std::string error;
};

void accumulate_timing(TimingStats& t, double ms) {
    t.mean_ms += ms;  // summed here, divided at the end
    t.max_ms = std::max(t.max_ms, ms);
    ++t.calls;
}

}  // namespace

TournamentResult run_tournament(const Strategy& a, const Strategy& b, const SimulationConfig& config) {
    config.validate();
    const std::size_t n = config.n_simulations;
    std::vector<SimSlot> slots(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            SimSlot& slot = slots[i];
            slot.a_is_radiant = !config.swap_sides || i < n / 2;
            slot.seed = simulation_seed(config, i);
            try {
                slot.outcome = slot.a_is_radiant ? simulate_draft(a, b, config, slot.seed)
                                                 : simulate_draft(b, a, config, slot.seed);
            } catch (const std::exception& e) {
                slot.error = e.what();
                failed.store(true);
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, n);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Aggregate in index order so the result is independent of scheduling.
    TournamentResult result;
    result.label_a = a.name();
    result.label_b = b.name();
    double sum = 0.0;
    std::size_t done = 0;
    for (std::size_t i = 0; i < n; ++i) {
        SimSlot& slot = slots[i];
        if (!slot.error.empty() && result.valid) {
            result.valid = false;
            result.error = "simulation " + std::to_string(i) + ": " + slot.error;
        }
        if (!slot.outcome) continue;
        const auto& o = *slot.outcome;
        sum += slot.a_is_radiant ? o.radiant_win_prob : 1.0 - o.radiant_win_prob;
        ++done;
        for (std::size_t step = 1; step < o.actions.size(); ++step) {
            const Team acting = config.schedule->turns()[step].team;
            const bool by_a = (acting == Team::Radiant) == slot.a_is_radiant;
            accumulate_timing(by_a ? result.timing_a : result.timing_b, o.step_millis[step]);
        }
        result.per_simulation.push_back({i, slot.seed, slot.a_is_radiant, o.actions, o.radiant_win_prob});
    }
    if (result.valid && done != n) {
        result.valid = false;
        result.error = "tournament aborted after " + std::to_string(done) + " simulations";
    }
    result.mean_win_rate_a = done ? sum / static_cast<double>(done) : 0.0;
    for (TimingStats* t : {&result.timing_a, &result.timing_b}) {
        if (t->calls) t->mean_ms /= static_cast<double>(t->calls);
    }
    return result;
}

SweepResult sweep_exploration(const std::vector<std::uint64_t>& iterations, const std::vector<double>& c_values,
                              const SimulationConfig& config, double benchmark_c) {
    if (iterations.empty() || c_values.empty()) throw ConfigError("sweep needs iteration and c lists");
    SweepResult out;
    out.iterations = iterations;
    out.c_values = c_values;
    out.benchmark_c = benchmark_c;
    for (std::uint64_t n : iterations) {
        UctConfig bench_cfg;
        bench_cfg.budget = SearchBudget::iterations(n);
        bench_cfg.exploration_c = benchmark_c;
        UctStrategy bench(config.reward, bench_cfg);
        std::vector<double> row;
        for (double c : c_values) {
            UctConfig cfg = bench_cfg;
            cfg.exploration_c = c;
            UctStrategy other(config.reward, cfg);
            const auto r = run_tournament(bench, other, config);
            if (!r.valid) throw Error("sweep cell failed: " + r.error);
            row.push_back(r.mean_win_rate_a);
        }
        const auto best = std::min_element(row.begin(), row.end()) - row.begin();
        out.best_c.push_back(c_values[static_cast<std::size_t>(best)]);
        out.win_rate.push_back(std::move(row));
    }
    return out;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<std::vector<double>>& matrix) {
    out << "strategy";
    for (const auto& l : labels) out << ',' << csv_escape(l);
    out << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << csv_escape(labels[i]);
        for (double v : matrix.at(i)) out << ',' << fmt(v);
        out << '\n';
    }
}

void write_tournament_csv(std::ostream& out, const TournamentResult& r) {
    // Identical strategies under shared swapped seeds score exactly one half.
    write_matrix_csv(out, {r.label_a, r.label_b},
                     {{0.5, r.mean_win_rate_a}, {r.mean_win_rate_b(), 0.5}});
}

nlohmann::json tournament_to_json(const TournamentResult& r, bool include_traces) {
    auto timing = [](const TimingStats& t) {
        return nlohmann::json{{"calls", t.calls}, {"mean_ms", t.mean_ms}, {"max_ms", t.max_ms}};
    };
    nlohmann::json j = {{"strategy_a", r.label_a},
                        {"strategy_b", r.label_b},
                        {"mean_win_rate_a", r.mean_win_rate_a},
                        {"mean_win_rate_b", r.mean_win_rate_b()},
                        {"n_simulations", r.per_simulation.size()},
                        {"valid", r.valid},
                        {"timing", {{"a", timing(r.timing_a)}, {"b", timing(r.timing_b)}}}};
    if (!r.valid) j["error"] = r.error;
    if (include_traces) {
        nlohmann::json traces = nlohmann::json::array();
        for (const auto& t : r.per_simulation) {
            traces.push_back({{"index", t.index},
                              {"seed", t.seed},
                              {"a_is_radiant", t.a_is_radiant},
                              {"actions", t.actions},
                              {"radiant_win_prob", t.radiant_win_prob}});
        }
        j["simulations"] = std::move(traces);
    }
    return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& s) {
    out << "benchmark";
    for (double c : s.c_values) out << ",c=" << c;
    out << ",best_c\n";
    for (std::size_t i = 0; i < s.iterations.size(); ++i) {
        out << "uct:" << s.iterations[i] << ':' << s.benchmark_c;
        for (double v : s.win_rate[i]) out << ',' << fmt(v);
        out << ',' << s.best_c[i] << '\n';
    }
}

nlohmann::json sweep_to_json(const SweepResult& s) {
    return {{"iterations", s.iterations},
            {"c_values", s.c_values},
            {"benchmark_c", s.benchmark_c},
            {"win_rate", s.win_rate},
            {"best_c", s.best_c}};
}

}  // namespace herodraft
