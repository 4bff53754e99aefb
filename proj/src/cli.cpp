#include "herodraft/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "herodraft/error.hpp"
#include "herodraft/harness.hpp"
#include "herodraft/model.hpp"
#include "herodraft/rules.hpp"
#include "herodraft/service.hpp"
#include "herodraft/strategy.hpp"
#include "herodraft/truth.hpp"
#include "herodraft/uct.hpp"

namespace herodraft::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr const char* kStrategyHelp =
    "Strategy specs: rd | hwr | ar[:pool_cap] | uct[:iterations[:c]]\n"
    "  e.g. uct:1600:0.5, uct:400:2^-2, ar, ar:10, hwr, rd.\n"
    "  hwr and ar need --data (or --rules for ar); uct needs --model.\n"
    "The default model path is read from HERODRAFT_MODEL when --model is omitted.";

std::string fixed(double v, int digits = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string resolve_model_path(const std::string& given, bool required) {
    if (!given.empty()) return given;
    if (const char* env = std::getenv(kModelEnv); env && *env) return env;
    if (required) throw UsageError("no reward model: pass --model or set " + std::string(kModelEnv));
    return {};
}

std::shared_ptr<const DraftSchedule> resolve_schedule(const std::string& spec, std::size_t n_heroes) {
    if (std::filesystem::is_regular_file(spec)) {
        auto s = std::make_shared<const DraftSchedule>(load_schedule(spec));
        if (s->n_heroes() != n_heroes) {
            throw DataError("schedule " + spec + " has " + std::to_string(s->n_heroes()) +
                            " heroes, the model expects " + std::to_string(n_heroes));
        }
        return s;
    }
    if (spec != "all_pick" && spec != "captain_mode") {
        throw UsageError("--schedule must be all_pick, captain_mode or a schedule file");
    }
    return std::make_shared<const DraftSchedule>(DraftSchedule::preset(spec, n_heroes));
}

std::vector<std::string> parse_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

/// Partial draft: {"schedule": name | object, "n_heroes": N, "actions": [...]}.
DraftState load_partial_draft(const std::string& path, std::size_t model_heroes) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open draft state " + path);
    json j;
    try {
        in >> j;
        const std::size_t n = j.value("n_heroes", model_heroes);
        if (n != model_heroes) {
            throw DataError(path + ": draft has " + std::to_string(n) + " heroes, the model expects " +
                            std::to_string(model_heroes));
        }
        const json& sched = j.at("schedule");
        auto schedule = sched.is_string()
                            ? std::make_shared<const DraftSchedule>(DraftSchedule::preset(sched.get<std::string>(), n))
                            : std::make_shared<const DraftSchedule>(schedule_from_json(sched));
        if (schedule->n_heroes() != n) throw DataError(path + ": schedule size disagrees with n_heroes");
        return replay(schedule, j.at("actions").get<std::vector<HeroId>>());
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    } catch (const IllegalActionError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

struct Global {
    bool json = false;
    std::size_t threads = 0;
};

// ---------------------------------------------------------------------------

struct SynthOptions {
    std::string truth_path;
    std::size_t heroes = 20;
    std::uint64_t truth_seed = 0;
    std::size_t synergy_pairs = 10;
    std::size_t opposition_pairs = 10;
    double strength = 1.0;
    double base_range = 0.3;
    double noise = 1.0;
    std::size_t matches = 100000;
    std::uint64_t seed = 0;
    std::string out;
    std::string save_truth;
};

int run_synth(const SynthOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    GroundTruthModel truth;
    json config = {{"matches", o.matches}, {"seed", o.seed}, {"out", o.out}};
    if (!o.truth_path.empty()) {
        truth = load_truth(o.truth_path);
        config["truth"] = o.truth_path;
    } else {
        RandomTruthConfig rc;
        rc.n_heroes = o.heroes;
        rc.base_range = o.base_range;
        rc.synergy_pairs = o.synergy_pairs;
        rc.opposition_pairs = o.opposition_pairs;
        rc.pair_strength = o.strength;
        rc.noise_scale = o.noise;
        truth = random_truth(rc, o.truth_seed);
        config["truth"] = {{"heroes", o.heroes},      {"seed", o.truth_seed},
                           {"base_range", o.base_range}, {"synergy_pairs", o.synergy_pairs},
                           {"opposition_pairs", o.opposition_pairs}, {"strength", o.strength},
                           {"noise", o.noise}};
    }
    err << "config: " << config.dump() << '\n';

    const MatchDataset ds = synth_generate(truth, o.matches, o.seed);
    save_matches(ds, o.out);
    if (!o.save_truth.empty()) save_truth(truth, o.save_truth);

    const json result = {{"command", "synth"},
                         {"config", config},
                         {"out", o.out},
                         {"n_matches", ds.size()},
                         {"n_heroes", ds.n_heroes},
                         {"radiant_win_rate", ds.radiant_win_rate()},
                         {"fingerprint", std::to_string(dataset_fingerprint(ds))}};
    if (g.json) {
        emit(out, result);
    } else {
        out << "wrote " << ds.size() << " matches over " << ds.n_heroes << " heroes to " << o.out
            << " (radiant win rate " << fixed(ds.radiant_win_rate()) << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct TrainOptions {
    std::string data;
    std::string kind = "nn";
    TrainConfig config;
    std::string out;
};

int run_train(const TrainOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    const ModelKind kind = parse_model_kind(o.kind);
    o.config.validate();
    json config = {{"data", o.data}, {"kind", to_string(kind)}, {"train", to_json(o.config)}, {"out", o.out}};
    err << "config: " << config.dump() << '\n';

    const MatchDataset ds = load_matches(o.data);
    const RewardModel model = train(ds, kind, o.config);
    save_model(model, o.out);

    const auto& log = model.training_log();
    json result = {{"command", "train"},
                   {"config", config},
                   {"model", o.out},
                   {"kind", to_string(kind)},
                   {"n_features", model.n_features()},
                   {"n_train", log.n_train},
                   {"n_validation", log.n_validation},
                   {"train_loss", log.train_loss},
                   {"validation_loss", log.validation_loss},
                   {"dataset_fingerprint", std::to_string(log.dataset_fingerprint)}};
    if (g.json) {
        emit(out, result);
    } else {
        out << "epoch  train_loss  validation_loss\n";
        for (std::size_t e = 0; e < log.train_loss.size(); ++e) {
            out << std::setw(5) << e + 1 << "  " << fixed(log.train_loss[e], 6) << "  "
                << (e < log.validation_loss.size() ? fixed(log.validation_loss[e], 6) : "-") << '\n';
        }
        out << "saved " << to_string(kind) << " model to " << o.out << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string model;
    std::string data;
};

int run_eval(const EvalOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    const std::string model_path = resolve_model_path(o.model, true);
    json config = {{"model", model_path}, {"data", o.data}};
    err << "config: " << config.dump() << '\n';

    const RewardModel model = load_model(model_path);
    const MatchDataset ds = load_matches(o.data, model.n_features());
    if (ds.n_heroes != model.n_features()) {
        throw DataError("dataset has " + std::to_string(ds.n_heroes) + " heroes, model expects " +
                        std::to_string(model.n_features()));
    }
    const EvalReport r = evaluate(model, ds);
    const json result = {{"command", "eval"},
                         {"config", config},
                         {"kind", to_string(model.kind())},
                         {"accuracy", r.accuracy},
                         {"auc", r.auc ? json(*r.auc) : json(nullptr)},
                         {"n_samples", r.n_samples}};
    if (g.json) {
        emit(out, result);
    } else {
        out << "samples   " << r.n_samples << '\n'
            << "accuracy  " << fixed(r.accuracy) << '\n'
            << "auc       " << (r.auc ? fixed(*r.auc) : "undefined (single class)") << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct MineOptions {
    std::string data;
    double min_support = 0.0001;
    std::size_t max_size = 3;
    std::string out;
};

int run_mine(const MineOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    json config = {{"data", o.data}, {"min_support", o.min_support}, {"max_rule_size", o.max_size}, {"out", o.out}};
    err << "config: " << config.dump() << '\n';

    const MatchDataset ds = load_matches(o.data);
    const RuleSet rules = mine_rules(ds, o.min_support, o.max_size);
    save_rules(rules, o.out);
    const auto n_ally = static_cast<std::size_t>(std::count_if(
        rules.rules.begin(), rules.rules.end(), [](const AssociationRule& r) { return r.kind == RuleKind::Ally; }));
    const json result = {{"command", "mine"},
                         {"config", config},
                         {"out", o.out},
                         {"n_rules", rules.rules.size()},
                         {"n_ally", n_ally},
                         {"n_enemy", rules.rules.size() - n_ally}};
    if (g.json) {
        emit(out, result);
    } else {
        out << "mined " << n_ally << " ally and " << rules.rules.size() - n_ally << " enemy rules into " << o.out
            << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ArenaOptions {
    std::string model;
    std::string data;
    std::string rules;
    double min_support = 0.0001;
    std::string schedule = "all_pick";
    std::size_t sims = 1000;
    std::uint64_t seed = 0;
    bool no_swap = false;
    std::string format = "csv";
    std::string out;
    bool traces = false;
};

struct Arena {
    SimulationConfig sim;
    StrategyContext context;
    json config;
};

Arena build_arena(const ArenaOptions& o, const Global& g) {
    Arena a;
    const std::string model_path = resolve_model_path(o.model, true);
    auto model = std::make_shared<const RewardModel>(load_model(model_path));
    a.context.reward = model;
    a.sim.reward = model;
    a.sim.schedule = resolve_schedule(o.schedule, model->n_features());
    a.sim.n_simulations = o.sims;
    a.sim.base_seed = o.seed;
    a.sim.swap_sides = !o.no_swap;
    a.sim.threads = g.threads;
    a.config = {{"model", model_path}, {"schedule", o.schedule},  {"sims", o.sims},
                {"seed", o.seed},      {"swap_sides", !o.no_swap}, {"threads", g.threads}};
    if (!o.data.empty()) {
        const MatchDataset ds = load_matches(o.data, model->n_features());
        if (ds.n_heroes != model->n_features()) throw DataError("dataset and model disagree on hero count");
        auto stats = std::make_shared<const HeroStats>(hero_stats(ds));
        a.context.stats = stats;
        a.sim.first_action_weights = stats->pick_frequency();
        a.config["data"] = o.data;
        if (o.rules.empty()) {
            a.context.rules = std::make_shared<const RuleSet>(mine_rules(ds, o.min_support, 3));
            a.config["min_support"] = o.min_support;
        }
    }
    if (!o.rules.empty()) {
        a.context.rules = std::make_shared<const RuleSet>(load_rules(o.rules));
        a.config["rules"] = o.rules;
    }
    try {
        a.sim.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    return a;
}

std::unique_ptr<Strategy> strategy_or_usage(const std::string& spec, const StrategyContext& ctx) {
    try {
        return make_strategy(spec, ctx);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << text;
}

struct TournamentOptions {
    ArenaOptions arena;
    std::string a;
    std::string b;
};

int run_tournament_cmd(const TournamentOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    Arena arena = build_arena(o.arena, g);
    auto a = strategy_or_usage(o.a, arena.context);
    auto b = strategy_or_usage(o.b, arena.context);
    arena.config["a"] = o.a;
    arena.config["b"] = o.b;
    err << "config: " << arena.config.dump() << '\n';

    const TournamentResult r = run_tournament(*a, *b, arena.sim);
    json result = tournament_to_json(r, o.arena.traces);
    result["command"] = "tournament";
    result["config"] = arena.config;

    std::ostringstream csv;
    write_tournament_csv(csv, r);
    if (!o.arena.out.empty()) {
        write_file(o.arena.out, o.arena.format == "json" ? result.dump(2) + "\n" : csv.str());
    }
    if (g.json) {
        emit(out, result);
    } else {
        out << csv.str();
        out << "mean win rate " << r.label_a << " vs " << r.label_b << ": " << fixed(r.mean_win_rate_a) << '\n';
        out << "mean ms per pick: " << r.label_a << " " << fixed(r.timing_a.mean_ms, 3) << " (max "
            << fixed(r.timing_a.max_ms, 3) << "), " << r.label_b << " " << fixed(r.timing_b.mean_ms, 3) << " (max "
            << fixed(r.timing_b.max_ms, 3) << ")\n";
    }
    if (!r.valid) {
        err << "error: tournament void: " << r.error << '\n';
        return 1;
    }
    return 0;
}

struct SweepOptions {
    ArenaOptions arena;
    std::string iterations = "100,200,400,800,1600";
    std::string cs = "2^-5,2^-4,2^-3,2^-2,2^-1,2^0,2^1";
    std::string benchmark_c = "1";
};

int run_sweep(const SweepOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    std::vector<std::uint64_t> iters;
    std::vector<double> cs;
    double bench;
    try {
        for (const auto& s : parse_list(o.iterations)) iters.push_back(std::stoull(s));
        for (const auto& s : parse_list(o.cs)) cs.push_back(parse_exploration_constant(s));
        bench = parse_exploration_constant(o.benchmark_c);
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid sweep list: ") + e.what());
    }
    if (iters.empty() || cs.empty() || std::count(iters.begin(), iters.end(), 0u)) {
        throw UsageError("--iters and --cs need positive entries");
    }
    Arena arena = build_arena(o.arena, g);
    arena.config["iters"] = iters;
    arena.config["cs"] = cs;
    arena.config["benchmark_c"] = bench;
    err << "config: " << arena.config.dump() << '\n';

    const SweepResult s = sweep_exploration(iters, cs, arena.sim, bench);
    json result = sweep_to_json(s);
    result["command"] = "sweep";
    result["config"] = arena.config;
    std::ostringstream csv;
    write_sweep_csv(csv, s);
    if (!o.arena.out.empty()) {
        write_file(o.arena.out, o.arena.format == "json" ? result.dump(2) + "\n" : csv.str());
    }
    if (g.json) {
        emit(out, result);
    } else {
        out << csv.str();
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct RecommendCmdOptions {
    std::string state;
    std::string model;
    std::uint64_t iters = 1600;
    std::uint64_t time_ms = 0;
    std::string c = "0.5";
    std::uint64_t seed = 0;
    std::size_t top_k = 10;
};

int run_recommend(const RecommendCmdOptions& o, const Global& g, std::ostream& out, std::ostream& err) {
    const std::string model_path = resolve_model_path(o.model, true);
    UctConfig cfg;
    try {
        cfg.exploration_c = parse_exploration_constant(o.c);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    cfg.seed = o.seed;
    cfg.budget = o.time_ms ? SearchBudget::wall_clock(std::chrono::milliseconds(o.time_ms))
                           : SearchBudget::iterations(o.iters);
    json config = {{"state", o.state}, {"model", model_path}, {"c", cfg.exploration_c}, {"seed", o.seed},
                   {"top_k", o.top_k}};
    if (o.time_ms) {
        config["time_ms"] = o.time_ms;
    } else {
        config["iters"] = o.iters;
    }
    err << "config: " << config.dump() << '\n';

    const RewardModel model = load_model(model_path);
    const DraftState state = load_partial_draft(o.state, model.n_features());
    if (state.is_terminal()) throw QueryError("the draft in " + o.state + " is already complete");
    const SearchResult r = search(state, model, cfg);

    auto edges = r.root_edges;
    std::sort(edges.begin(), edges.end(), [](const EdgeStats& a, const EdgeStats& b) {
        if (a.mean_reward != b.mean_reward) return a.mean_reward > b.mean_reward;
        return a.hero < b.hero;
    });
    if (edges.size() > o.top_k) edges.resize(o.top_k);
    json list = json::array();
    for (const auto& e : edges) list.push_back({{"hero", e.hero}, {"visits", e.visits}, {"win_rate", e.mean_reward}});
    const Turn t = state.turn();
    const json result = {{"command", "recommend"},
                         {"config", config},
                         {"hero", r.best},
                         {"step", state.step()},
                         {"team", to_string(t.team)},
                         {"kind", to_string(t.kind)},
                         {"iterations", r.stats.iterations},
                         {"root_visits", r.root_visits},
                         {"value", team_reward(t.team, r.root_value_radiant)},
                         {"elapsed_ms", r.stats.elapsed_ms},
                         {"edges", list}};
    if (g.json) {
        emit(out, result);
    } else {
        out << "recommend hero " << r.best << " (" << to_string(t.team) << " " << to_string(t.kind) << ", step "
            << state.step() << ")\n"
            << r.stats.iterations << " iterations in " << fixed(r.stats.elapsed_ms, 1) << " ms, root value "
            << fixed(team_reward(t.team, r.root_value_radiant)) << "\n"
            << "  hero  visits  win_rate\n";
        for (const auto& e : edges) {
            out << std::setw(6) << e.hero << std::setw(8) << e.visits << "  " << fixed(e.mean_reward) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ServeOptions {
    std::vector<std::string> models;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::string log;
    std::string hero_names;
    std::uint64_t iters = 1600;
    std::string c = "0.5";
    std::uint64_t seed = 0;
    std::uint64_t max_iters = 200000;
    std::uint64_t time_cap_ms = 20000;
};

std::vector<std::string> load_hero_names(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open hero names " + path);
    try {
        json j;
        in >> j;
        return j.get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError(path + ": expected a JSON array of names (" + e.what() + ")");
    }
}

int run_serve(const ServeOptions& o, const Global&, std::ostream& out, std::ostream& err) {
    ServiceConfig sc;
    std::vector<std::string> specs = o.models;
    if (specs.empty()) specs.push_back(resolve_model_path("", true));
    json models = json::object();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto eq = specs[i].find('=');
        const std::string id = eq == std::string::npos ? (i == 0 ? "default" : "model" + std::to_string(i))
                                                       : specs[i].substr(0, eq);
        const std::string path = eq == std::string::npos ? specs[i] : specs[i].substr(eq + 1);
        if (sc.models.count(id)) throw UsageError("duplicate model id '" + id + "'");
        sc.models[id] = std::make_shared<const RewardModel>(load_model(path));
        models[id] = path;
        if (i == 0) sc.default_model = id;
    }
    try {
        sc.default_uct.exploration_c = parse_exploration_constant(o.c);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    sc.default_uct.budget = SearchBudget::iterations(std::min(o.iters, o.max_iters));
    sc.default_uct.seed = o.seed;
    sc.max_iterations = o.max_iters;
    sc.search_time_cap = std::chrono::milliseconds(o.time_cap_ms);
    sc.log_path = o.log;
    sc.static_dir = o.static_dir;
    if (!o.hero_names.empty()) sc.hero_names = load_hero_names(o.hero_names);

    const json config = {{"models", models},        {"host", o.host},        {"port", o.port},
                         {"static", o.static_dir},  {"log", o.log},          {"iters", o.iters},
                         {"c", sc.default_uct.exploration_c}, {"seed", o.seed}, {"max_iters", o.max_iters},
                         {"time_cap_ms", o.time_cap_ms}};
    err << "config: " << config.dump() << '\n';
    DraftService service(std::move(sc));
    out << "serving on http://" << o.host << ':' << o.port << std::endl;
    serve(service, o.host, o.port);
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hero draft recommender: reward models, UCT search, tournaments and a draft service.", "herodraft"};
    app.footer(kStrategyHelp);
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_flag("--json", g.json, "Machine-readable JSON on stdout");
    app.add_option("--threads", g.threads, "Worker threads for tournaments (0: all cores)");

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic matches from a ground-truth model");
    synth_cmd->add_option("--truth", synth.truth_path, "Ground-truth JSON file (otherwise a random truth)");
    synth_cmd->add_option("--heroes", synth.heroes, "Hero pool size of a random truth")->capture_default_str();
    synth_cmd->add_option("--truth-seed", synth.truth_seed, "Seed of a random truth")->capture_default_str();
    synth_cmd->add_option("--synergy-pairs", synth.synergy_pairs)->capture_default_str();
    synth_cmd->add_option("--opposition-pairs", synth.opposition_pairs)->capture_default_str();
    synth_cmd->add_option("--strength", synth.strength, "Magnitude of pair effects")->capture_default_str();
    synth_cmd->add_option("--base-range", synth.base_range)->capture_default_str();
    synth_cmd->add_option("--noise", synth.noise, "Logit noise scale")->capture_default_str();
    synth_cmd->add_option("--matches", synth.matches)->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "Output JSONL")->required();
    synth_cmd->add_option("--save-truth", synth.save_truth, "Also write the truth model here");

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Train a reward model on match data");
    train_cmd->add_option("--data", tr.data, "Match JSONL")->required();
    train_cmd->add_option("--kind", tr.kind, "mc | lr | nn")->capture_default_str();
    train_cmd->add_option("--hidden", tr.config.hidden_units)->capture_default_str();
    train_cmd->add_option("--lr", tr.config.learning_rate)->capture_default_str();
    train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
    train_cmd->add_option("--batch", tr.config.batch_size)->capture_default_str();
    train_cmd->add_option("--l2", tr.config.l2_penalty)->capture_default_str();
    train_cmd->add_option("--val-frac", tr.config.validation_fraction)->capture_default_str();
    train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();
    train_cmd->add_option("--out", tr.out, "Model file to write")->required();

    EvalOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Accuracy and AUC of a model on match data");
    eval_cmd->add_option("--model", ev.model, "Model file (default $HERODRAFT_MODEL)");
    eval_cmd->add_option("--data", ev.data, "Match JSONL")->required();

    MineOptions mi;
    auto* mine_cmd = app.add_subcommand("mine", "Mine ally and enemy association rules");
    mine_cmd->add_option("--data", mi.data, "Match JSONL")->required();
    mine_cmd->add_option("--min-support", mi.min_support)->capture_default_str();
    mine_cmd->add_option("--max-size", mi.max_size)->capture_default_str();
    mine_cmd->add_option("--out", mi.out, "Rules JSON to write")->required();

    auto add_arena = [](CLI::App* cmd, ArenaOptions& a) {
        cmd->add_option("--model", a.model, "Reward model (default $HERODRAFT_MODEL)");
        cmd->add_option("--data", a.data, "Match JSONL for hero statistics, rules and first-pick weights");
        cmd->add_option("--rules", a.rules, "Pre-mined rules JSON");
        cmd->add_option("--min-support", a.min_support, "Rule support when mining from --data")
            ->capture_default_str();
        cmd->add_option("--schedule", a.schedule, "all_pick | captain_mode | schedule file")->capture_default_str();
        cmd->add_option("--sims", a.sims)->capture_default_str();
        cmd->add_option("--seed", a.seed)->capture_default_str();
        cmd->add_flag("--no-swap", a.no_swap, "Keep A as Radiant in every simulation");
        cmd->add_option("--format", a.format, "File format for --out")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--out", a.out, "Write the result to this file");
    };

    TournamentOptions to;
    auto* tour_cmd = app.add_subcommand("tournament", "Swapped-sides tournament between two strategies");
    tour_cmd->add_option("--a", to.a, "Row strategy spec")->required();
    tour_cmd->add_option("--b", to.b, "Column strategy spec")->required();
    add_arena(tour_cmd, to.arena);
    tour_cmd->add_flag("--traces", to.arena.traces, "Include per-simulation traces in JSON");
    tour_cmd->footer(kStrategyHelp);

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Exploration-constant sweep against UCT(n, benchmark c)");
    sweep_cmd->add_option("--iters", sw.iterations, "Comma-separated iteration budgets")->capture_default_str();
    sweep_cmd->add_option("--cs", sw.cs, "Comma-separated c values (decimal or 2^k)")->capture_default_str();
    sweep_cmd->add_option("--benchmark-c", sw.benchmark_c)->capture_default_str();
    add_arena(sweep_cmd, sw.arena);

    RecommendCmdOptions rc;
    auto* rec_cmd = app.add_subcommand("recommend", "UCT recommendation for a partial draft");
    rec_cmd->add_option("--state", rc.state, "Partial draft JSON {schedule, n_heroes, actions}")->required();
    rec_cmd->add_option("--model", rc.model, "Reward model (default $HERODRAFT_MODEL)");
    rec_cmd->add_option("--iters", rc.iters)->capture_default_str();
    rec_cmd->add_option("--time-ms", rc.time_ms, "Wall-clock budget instead of iterations");
    rec_cmd->add_option("--c", rc.c, "Exploration constant (decimal or 2^k)")->capture_default_str();
    rec_cmd->add_option("--seed", rc.seed)->capture_default_str();
    rec_cmd->add_option("--top-k", rc.top_k)->capture_default_str();

    ServeOptions sv;
    auto* serve_cmd = app.add_subcommand("serve", "Run the draft-session HTTP service");
    serve_cmd->add_option("--model", sv.models, "Model file or id=file; repeatable, first is the default");
    serve_cmd->add_option("--host", sv.host)->capture_default_str();
    serve_cmd->add_option("--port", sv.port)->capture_default_str();
    serve_cmd->add_option("--static", sv.static_dir, "Directory of UI assets served at /");
    serve_cmd->add_option("--log", sv.log, "Append-only session log for crash recovery");
    serve_cmd->add_option("--hero-names", sv.hero_names, "JSON array of hero names");
    serve_cmd->add_option("--iters", sv.iters, "Default search iterations")->capture_default_str();
    serve_cmd->add_option("--c", sv.c)->capture_default_str();
    serve_cmd->add_option("--seed", sv.seed)->capture_default_str();
    serve_cmd->add_option("--max-iters", sv.max_iters, "Cap on client budget overrides")->capture_default_str();
    serve_cmd->add_option("--time-cap-ms", sv.time_cap_ms, "Hard wall-clock cap per search")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*synth_cmd) return run_synth(synth, g, out, err);
        if (*train_cmd) return run_train(tr, g, out, err);
        if (*eval_cmd) return run_eval(ev, g, out, err);
        if (*mine_cmd) return run_mine(mi, g, out, err);
        if (*tour_cmd) return run_tournament_cmd(to, g, out, err);
        if (*sweep_cmd) return run_sweep(sw, g, out, err);
        if (*rec_cmd) return run_recommend(rc, g, out, err);
        if (*serve_cmd) return run_serve(sv, g, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, out, err);
}

}  // namespace herodraft::cli
