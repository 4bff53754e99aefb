// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every threshold and configuration below is fixed in
// advance; nothing is tuned on the outcome.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "herodraft/harness.hpp"
#include "herodraft/minimax.hpp"
#include "herodraft/model.hpp"
#include "herodraft/strategy.hpp"
#include "herodraft/truth.hpp"
#include "herodraft/uct.hpp"
#include "support/common.hpp"
#include "support/oracles.hpp"

using namespace herodraft;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << (ok ? "" : "NOT ") << what;
    }
};

std::string f4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Tuned once, before any tournament ran, from validation AUC alone; used
/// for both model kinds wherever a trained reward is compared or played.
TrainConfig tuned_training() {
    TrainConfig c;
    c.learning_rate = 0.5;
    c.epochs = 30;
    c.batch_size = 256;
    return c;
}

/// N=20 synthetic world shared by several criteria.
struct World20 {
    GroundTruthModel truth = load_truth(testing::fixture("truth_n20.json"));
    MatchDataset data = synth_generate(truth, 100000, 1);
    MatchDataset test = synth_generate(truth, 20000, 2);
    std::shared_ptr<const RewardModel> nn;
    std::shared_ptr<const HeroStats> stats;
    std::shared_ptr<const RuleSet> rules;

    World20() {
        nn = std::make_shared<const RewardModel>(train(data, ModelKind::NeuralNet, tuned_training()));
        stats = std::make_shared<const HeroStats>(hero_stats(data));
        rules = std::make_shared<const RuleSet>(mine_rules(data, 0.0001, 3));
    }

    SimulationConfig arena(std::size_t sims, std::uint64_t seed = 1) const {
        SimulationConfig c;
        c.schedule = std::make_shared<const DraftSchedule>(DraftSchedule::all_pick(20));
        c.reward = nn;
        c.n_simulations = sims;
        c.base_seed = seed;
        c.first_action_weights = stats->pick_frequency();
        c.threads = 1;
        return c;
    }
    StrategyContext context() const { return {nn, stats, rules}; }
};

World20& world20() {
    static World20 w;
    return w;
}

/// N=111 world with an NN reward at the default training settings.
struct World111 {
    MatchDataset data;
    std::shared_ptr<const RewardModel> nn;
    std::shared_ptr<const HeroStats> stats;
    std::shared_ptr<const RuleSet> rules;

    World111() {
        RandomTruthConfig rc;
        rc.n_heroes = 111;
        rc.synergy_pairs = 60;
        rc.opposition_pairs = 60;
        data = synth_generate(random_truth(rc, 11), 100000, 11);
        nn = std::make_shared<const RewardModel>(train(data, ModelKind::NeuralNet, TrainConfig{}));
        stats = std::make_shared<const HeroStats>(hero_stats(data));
        rules = std::make_shared<const RuleSet>(mine_rules(data, 0.0001, 3));
    }

    SimulationConfig arena(std::size_t sims) const {
        SimulationConfig c;
        c.schedule = std::make_shared<const DraftSchedule>(DraftSchedule::all_pick(111));
        c.reward = nn;
        c.n_simulations = sims;
        c.base_seed = 3;
        c.first_action_weights = stats->pick_frequency();
        c.threads = 1;
        return c;
    }
    StrategyContext context() const { return {nn, stats, rules}; }
};

World111& world111() {
    static World111 w;
    return w;
}

RewardModel random_lr(std::size_t n, Rng& rng) {
    std::vector<double> w(n + 1);
    for (auto& v : w) v = uniform_real(rng, -2.0, 2.0);
    return RewardModel(ModelKind::LogisticRegression, n, 0, w);
}

// ---------------------------------------------------------------------------

void oracle_convergence(Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    int optimal = 0;
    const int instances = 100;
    for (int i = 0; i < instances; ++i) {
        const RewardModel lr = random_lr(8, rng);
        const DraftState root(testing::two_v_two(8));
        const MinimaxResult exact = minimax_solve(root, lr);
        UctConfig cfg;
        cfg.budget = SearchBudget::iterations(20000);
        cfg.exploration_c = 0.5;
        cfg.seed = static_cast<std::uint64_t>(i);
        const HeroId best = recommend(root, lr, cfg);
        optimal += std::find(exact.optimal_actions.begin(), exact.optimal_actions.end(), best) !=
                   exact.optimal_actions.end();
    }
    const double secs = seconds_since(t0);
    v.require(optimal >= 95, std::to_string(optimal) + "/100 minimax-optimal (need >= 95)");
    v.require(secs < 120, "runtime " + f4(secs) + " s < 120 s");
}

TournamentResult play(const World20& w, const std::string& a, const std::string& b) {
    const auto ctx = w.context();
    return run_tournament(*make_strategy(a, ctx), *make_strategy(b, ctx), w.arena(1000));
}

void strategy_ordering(Verdict& v) {
    const World20& w = world20();
    struct Pair {
        const char* a;
        const char* b;
    };
    // Each stronger strategy must beat the next weaker one head-to-head by
    // at least 0.03 over 0.5.
    for (const Pair p : {Pair{"uct:1600:0.5", "uct:400:0.25"}, Pair{"uct:400:0.25", "hwr"},
                         Pair{"uct:400:0.25", "ar"}, Pair{"hwr", "rd"}, Pair{"ar", "rd"}}) {
        const TournamentResult r = play(w, p.a, p.b);
        v.require(r.valid && r.mean_win_rate_a >= 0.53,
                  std::string(p.a) + " vs " + p.b + " " + f4(r.mean_win_rate_a) + " >= 0.53");
    }
    const TournamentResult r = play(w, "uct:1600:0.5", "uct:800:0.5");
    v.require(r.valid && r.mean_win_rate_a >= 0.48 && r.mean_win_rate_a <= 0.58,
              "uct1600 vs uct800 " + f4(r.mean_win_rate_a) + " in [0.48, 0.58]");
}

void ar_beats_rd(Verdict& v) {
    const TournamentResult r = play(world20(), "ar", "rd");
    v.require(r.valid && r.mean_win_rate_a > 0.55, "ar vs rd " + f4(r.mean_win_rate_a) + " > 0.55");
}

void branching_footnote(Verdict& v) {
    const World111& w = world111();
    UctConfig cfg;
    cfg.budget = SearchBudget::iterations(100);
    cfg.exploration_c = 1.0;
    const SearchResult r = search(new_draft(DraftSchedule::all_pick(111)), *w.nn, cfg);
    v.require(r.stats.root_selections == 0,
              "root UCB1 selections " + std::to_string(r.stats.root_selections) + " == 0");
    v.require(r.root_edges.size() == 100, std::to_string(r.root_edges.size()) + " root edges expanded once each");

    const std::vector<double> cs{1.0 / 32, 1.0 / 16, 1.0 / 8, 0.25, 0.5, 1.0, 2.0};
    const SweepResult s = sweep_exploration({100}, cs, w.arena(1000), 1.0);
    const auto [lo, hi] = std::minmax_element(s.win_rate[0].begin(), s.win_rate[0].end());
    v.require(*hi - *lo < 0.02, "sweep row n=100 spans [" + f4(*lo) + ", " + f4(*hi) + "], range < 0.02");
}

void reward_quality(Verdict& v) {
    const World20& w = world20();
    const RewardModel lr = train(w.data, ModelKind::LogisticRegression, tuned_training());
    const double auc_nn = evaluate(*w.nn, w.test).auc_value();
    const double auc_lr = evaluate(lr, w.test).auc_value();
    v.require(auc_nn - auc_lr >= 0.02, "AUC nn " + f4(auc_nn) + " - lr " + f4(auc_lr) + " >= 0.02");

    // Central-difference gradient check of the network, with the L2 term.
    Rng rng(5);
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
        RewardModel m = RewardModel::initial(ModelKind::NeuralNet, 10, 4, 40 + trial);
        for (auto& p : m.mutable_parameters()) p += uniform_real(rng, -0.5, 0.5);
        std::vector<SparseFeatures> xs;
        std::vector<int> ys;
        for (int k = 0; k < 32; ++k) {
            std::vector<double> x(10);
            for (auto& e : x) e = static_cast<double>(static_cast<int>(uniform_index(rng, 3)) - 1);
            xs.push_back(to_sparse(x));
            ys.push_back(static_cast<int>(uniform_index(rng, 2)));
        }
        std::vector<double> grad;
        loss_and_gradient(m, xs, ys, 0.01, grad);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const double orig = m.parameters()[i], eps = 1e-5;
            m.mutable_parameters()[i] = orig + eps;
            const double up = loss(m, xs, ys, 0.01);
            m.mutable_parameters()[i] = orig - eps;
            const double down = loss(m, xs, ys, 0.01);
            m.mutable_parameters()[i] = orig;
            const double numeric = (up - down) / (2 * eps);
            worst = std::max(worst, std::abs(numeric - grad[i]) /
                                        std::max({std::abs(numeric), std::abs(grad[i]), 1e-7}));
        }
    }
    v.require(worst < 1e-4, "gradient max relative error " + sci(worst) + " < 1e-4");

    int exact = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> scores(1000);
        std::vector<int> labels(1000);
        for (std::size_t i = 0; i < 1000; ++i) {
            scores[i] = static_cast<double>(uniform_index(rng, trial % 2 ? 13 : 1000000));
            labels[i] = static_cast<int>(uniform_index(rng, 2));
        }
        exact += auc(scores, labels) == oracle::brute_auc(scores, labels);
    }
    v.require(exact == 10, std::to_string(exact) + "/10 AUCs equal the all-pairs count exactly");
}

void latency(Verdict& v) {
    const World111& w = world111();
    const auto ctx = w.context();
    RandomStrategy rd;
    double worst_max = 0;
    std::string worst_name;
    double uct1600_mean = -1;
    for (const char* spec : {"uct:1600:0.5", "uct:400:0.25", "hwr", "ar", "rd"}) {
        const auto s = make_strategy(spec, ctx);
        const TournamentResult r = run_tournament(*s, rd, w.arena(20));
        if (std::string(spec) == "uct:1600:0.5") uct1600_mean = r.timing_a.mean_ms;
        if (r.timing_a.max_ms > worst_max) {
            worst_max = r.timing_a.max_ms;
            worst_name = spec;
        }
        if (r.timing_b.max_ms > worst_max) {
            worst_max = r.timing_b.max_ms;
            worst_name = "rd";
        }
    }
    v.require(uct1600_mean >= 0 && uct1600_mean <= 2000,
              "uct1600 mean " + f4(uct1600_mean) + " ms/pick <= 2000 at N=111");
    v.require(worst_max < 25000, "slowest pick " + f4(worst_max) + " ms (" + worst_name + ") < 25 s");
}

void legality_fuzz(Verdict& v) {
    const World20& w20 = world20();
    // Captain Mode needs at least 22 heroes; a 30-hero world is used there.
    RandomTruthConfig rc;
    rc.n_heroes = 30;
    const GroundTruthModel t30 = random_truth(rc, 30);
    const MatchDataset d30 = synth_generate(t30, 20000, 30);
    StrategyContext ctx30{std::make_shared<const TruthReward>(t30), std::make_shared<const HeroStats>(hero_stats(d30)),
                          std::make_shared<const RuleSet>(mine_rules(d30, 0.001, 3))};

    std::size_t sims = 0, bad_drafts = 0, mirror_breaks = 0;
    double worst_sum_dev = 0;
    auto run_pair = [&](const SimulationConfig& cfg, const StrategyContext& ctx, const std::string& a,
                        const std::string& b, bool captain) {
        const auto sa = make_strategy(a, ctx), sb = make_strategy(b, ctx);
        const TournamentResult ab = run_tournament(*sa, *sb, cfg);
        const TournamentResult ba = run_tournament(*sb, *sa, cfg);
        if (!ab.valid || !ba.valid) {
            bad_drafts += cfg.n_simulations;
            return;
        }
        const std::size_t n = cfg.n_simulations, half = n / 2;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& acts = ab.per_simulation[i].actions;
            const DraftState s = replay(cfg.schedule, acts);
            std::vector<HeroId> sorted = acts;
            std::sort(sorted.begin(), sorted.end());
            const bool ok = s.is_terminal() && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
                            s.picks(Team::Radiant).size() == 5 && s.picks(Team::Dire).size() == 5 &&
                            s.bans().size() == (captain ? 12u : 0u);
            bad_drafts += !ok;
            const auto& mirror = ba.per_simulation[(i + half) % n];
            mirror_breaks += mirror.actions != acts || mirror.radiant_win_prob != ab.per_simulation[i].radiant_win_prob;
        }
        worst_sum_dev = std::max(worst_sum_dev, std::abs(ab.mean_win_rate_a + ba.mean_win_rate_a - 1.0));
        sims += n;
    };

    SimulationConfig ap = w20.arena(1250, 77);
    ap.reward = std::make_shared<const TruthReward>(w20.truth);
    SimulationConfig cm;
    cm.schedule = std::make_shared<const DraftSchedule>(DraftSchedule::captain_mode(30));
    cm.reward = ctx30.reward;
    cm.n_simulations = 1250;
    cm.base_seed = 78;
    cm.first_action_weights = ctx30.stats->pick_frequency();
    cm.threads = 1;
    for (const auto& [a, b] : {std::pair{"rd", "hwr"}, {"ar", "rd"}, {"uct:50:1", "ar"}, {"hwr", "uct:20:0.25"}}) {
        run_pair(ap, w20.context(), a, b, false);
        run_pair(cm, ctx30, a, b, true);
    }
    v.require(sims == 10000, std::to_string(sims) + " simulations");
    v.require(bad_drafts == 0, std::to_string(bad_drafts) + " drafts with duplicates or wrong compositions");
    v.require(mirror_breaks == 0, std::to_string(mirror_breaks) + " swapped drafts that are not exact mirrors");
    v.require(worst_sum_dev <= 1e-12, "max |W(A,B) + W(B,A) - 1| = " + sci(worst_sum_dev) + " <= 1e-12");
}

void determinism(Verdict& v) {
    const World20& w = world20();
    TrainConfig tc;
    tc.epochs = 3;
    tc.seed = 9;
    const MatchDataset small = synth_generate(w.truth, 20000, 9);
    for (auto kind : {ModelKind::LogisticRegression, ModelKind::NeuralNet}) {
        v.require(train(small, kind, tc).parameters() == train(small, kind, tc).parameters(),
                  "train(" + std::string(to_string(kind)) + ") bit-identical");
    }
    v.require(synth_generate(w.truth, 5000, 4) == synth_generate(w.truth, 5000, 4), "synth bit-identical");

    const auto ctx = w.context();
    const auto uct = make_strategy("uct:400", ctx);
    const auto ar = make_strategy("ar", ctx);
    SimulationConfig cfg = w.arena(40, 12);
    bool same = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SimulationOutcome a = simulate_draft(*uct, *ar, cfg, seed), b = simulate_draft(*uct, *ar, cfg, seed);
        same = same && a.actions == b.actions && a.radiant_win_prob == b.radiant_win_prob;
    }
    v.require(same, "simulate_draft bit-identical");

    const TournamentResult t1 = run_tournament(*uct, *ar, cfg), t2 = run_tournament(*uct, *ar, cfg);
    cfg.threads = 4;
    const TournamentResult t4 = run_tournament(*uct, *ar, cfg);
    auto traces_equal = [](const TournamentResult& x, const TournamentResult& y) {
        if (x.per_simulation.size() != y.per_simulation.size()) return false;
        for (std::size_t i = 0; i < x.per_simulation.size(); ++i) {
            if (x.per_simulation[i].actions != y.per_simulation[i].actions ||
                x.per_simulation[i].radiant_win_prob != y.per_simulation[i].radiant_win_prob) {
                return false;
            }
        }
        return x.mean_win_rate_a == y.mean_win_rate_a;
    };
    v.require(traces_equal(t1, t2), "tournament bit-identical");
    v.require(traces_equal(t1, t4), "tournament identical with 4 threads");

    UctConfig rc;
    rc.budget = SearchBudget::iterations(1600);
    rc.seed = 3;
    const DraftState s = replay(cfg.schedule, {4, 9, 13});
    const SearchResult r1 = search(s, *w.nn, rc), r2 = search(s, *w.nn, rc);
    bool edges_same = r1.root_edges.size() == r2.root_edges.size() && r1.best == r2.best &&
                      r1.root_value_radiant == r2.root_value_radiant;
    for (std::size_t i = 0; edges_same && i < r1.root_edges.size(); ++i) {
        edges_same = r1.root_edges[i].visits == r2.root_edges[i].visits &&
                     r1.root_edges[i].mean_reward == r2.root_edges[i].mean_reward;
    }
    v.require(edges_same, "recommend bit-identical");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"oracle convergence", oracle_convergence},
        {"strategy strength ordering", strategy_ordering},
        {"AR beats RD", ar_beats_rd},
        {"branching footnote", branching_footnote},
        {"reward-model quality", reward_quality},
        {"latency envelope", latency},
        {"draft legality fuzzing", legality_fuzz},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << name << ": " << v.detail.str() << " ["
                  << f4(seconds_since(t0)) << " s]" << std::endl;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed ? 1 : 0;
}
