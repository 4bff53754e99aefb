#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "herodraft/cli.hpp"
#include "herodraft/harness.hpp"
#include "herodraft/model.hpp"
#include "herodraft/truth.hpp"
#include "support/common.hpp"

using namespace herodraft;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;

    json parsed() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

/// Scoped environment variable.
struct EnvVar {
    EnvVar(const char* name, const std::string& value) : name_(name) { ::setenv(name, value.c_str(), 1); }
    ~EnvVar() { ::unsetenv(name_); }
    const char* name_;
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2, help exits 0") {
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"train"}).code == 2);  // --data and --out are required
    CHECK(run({"synth", "--out", "x", "--matches", "ten"}).code == 2);
}

TEST_CASE("domain errors exit 1") {
    testing::TempDir dir;
    const Run r = run({"train", "--data", dir.file("missing.jsonl"), "--out", dir.file("m.json")});
    CHECK(r.code == 1);
    CHECK(r.err.find("missing.jsonl") != std::string::npos);

    std::ofstream(dir.file("bad.jsonl")) << "{\"radiant\":[0,1,2,3,4],\"dire\":[0,6,7,8,9],\"radiant_win\":true}\n";
    CHECK(run({"train", "--data", dir.file("bad.jsonl"), "--out", dir.file("m.json")}).code == 1);
    CHECK(run({"train", "--data", dir.file("bad.jsonl"), "--out", dir.file("m.json"), "--kind", "svm"}).code != 0);
}

TEST_CASE("synth, train, eval and mine form a pipeline") {
    testing::TempDir dir;
    const std::string data = dir.file("m.jsonl"), model = dir.file("nn.json"), rules = dir.file("rules.json");

    Run r = run({"--json", "synth", "--matches", "3000", "--seed", "4", "--out", data, "--save-truth", dir.file("t.json")});
    REQUIRE(r.code == 0);
    CHECK(r.parsed().at("n_matches") == 3000);
    CHECK(r.parsed().at("config").at("seed") == 4);
    CHECK(r.err.rfind("config: ", 0) == 0);
    CHECK(load_matches(data) == synth_generate(random_truth({}, 0), 3000, 4));

    r = run({"synth", "--truth", dir.file("t.json"), "--matches", "3000", "--seed", "4", "--out", dir.file("again.jsonl")});
    CHECK(r.code == 0);
    CHECK(load_matches(dir.file("again.jsonl")) == load_matches(data));

    r = run({"--json", "train", "--data", data, "--kind", "nn", "--hidden", "8", "--epochs", "3", "--seed", "2", "--out", model});
    REQUIRE(r.code == 0);
    CHECK(r.parsed().at("train_loss").size() == 3);
    CHECK(r.parsed().at("n_validation") == 300);
    TrainConfig tc;
    tc.hidden_units = 8;
    tc.epochs = 3;
    tc.seed = 2;
    CHECK(load_model(model) == train(load_matches(data), ModelKind::NeuralNet, tc));

    r = run({"--json", "eval", "--model", model, "--data", data});
    REQUIRE(r.code == 0);
    const EvalReport expect = evaluate(load_model(model), load_matches(data));
    CHECK(r.parsed().at("accuracy") == expect.accuracy);
    CHECK(r.parsed().at("auc") == *expect.auc);

    r = run({"eval", "--model", model, "--data", data});
    CHECK(r.code == 0);
    CHECK(r.out.find("accuracy") != std::string::npos);

    r = run({"--json", "mine", "--data", data, "--min-support", "0.01", "--out", rules});
    REQUIRE(r.code == 0);
    CHECK(load_rules(rules).rules == mine_rules(load_matches(data), 0.01, 3).rules);
}

TEST_CASE("tournament output matches the library") {
    testing::TempDir dir;
    const std::string model = dir.file("lr.json");
    save_model(RewardModel::initial(ModelKind::LogisticRegression, 20, 0, 8), model);

    const Run r = run({"--json", "--threads", "2", "tournament", "--a", "uct:100", "--b", "rd", "--model", model,
                       "--sims", "20", "--seed", "5", "--out", dir.file("t.csv")});
    REQUIRE(r.code == 0);

    SimulationConfig cfg;
    cfg.schedule = std::make_shared<const DraftSchedule>(DraftSchedule::all_pick(20));
    cfg.reward = std::make_shared<const RewardModel>(load_model(model));
    cfg.n_simulations = 20;
    cfg.base_seed = 5;
    cfg.threads = 1;
    StrategyContext ctx{cfg.reward, nullptr, nullptr};
    const TournamentResult lib = run_tournament(*make_strategy("uct:100", ctx), RandomStrategy(), cfg);
    CHECK(r.parsed().at("mean_win_rate_a") == lib.mean_win_rate_a);
    CHECK(r.parsed().at("strategy_a") == "uct:100:0.5");
    CHECK(r.parsed().at("config").at("threads") == 2);
    CHECK_FALSE(r.parsed().contains("simulations"));

    std::ostringstream csv;
    write_tournament_csv(csv, lib);
    std::ifstream f(dir.file("t.csv"));
    CHECK(std::string(std::istreambuf_iterator<char>(f), {}) == csv.str());

    // Strategies needing data they were not given are usage errors.
    CHECK(run({"tournament", "--a", "hwr", "--b", "rd", "--model", model, "--sims", "2"}).code == 2);
    CHECK(run({"tournament", "--a", "uct", "--b", "rd", "--model", model, "--sims", "3"}).code == 2);
}

TEST_CASE("sweep writes a matrix") {
    testing::TempDir dir;
    const std::string model = dir.file("lr.json");
    save_model(RewardModel::initial(ModelKind::LogisticRegression, 20, 0, 8), model);
    const Run r = run({"--json", "sweep", "--model", model, "--iters", "20,40", "--cs", "2^-1,1", "--sims", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.parsed().at("win_rate").size() == 2);
    CHECK(r.parsed().at("win_rate").at(0).at(1) == 0.5);
    CHECK(run({"sweep", "--model", model, "--iters", "0", "--sims", "4"}).code == 2);
}

TEST_CASE("recommend reads partial drafts and the model from the environment") {
    testing::TempDir dir;
    const std::string model = dir.file("nn.json");
    const RewardModel m = RewardModel::initial(ModelKind::NeuralNet, 24, 6, 2);
    save_model(m, model);
    std::ofstream(dir.file("state.json")) << R"({"schedule":"captain_mode","n_heroes":24,"actions":[3,4,5]})";

    Run r = run({"recommend", "--state", dir.file("state.json")});
    CHECK(r.code == 2);  // no --model and no environment default
    CHECK(r.err.find(cli::kModelEnv) != std::string::npos);

    const EnvVar env(cli::kModelEnv, model);
    r = run({"--json", "recommend", "--state", dir.file("state.json"), "--iters", "500", "--seed", "7", "--top-k", "3"});
    REQUIRE(r.code == 0);
    const json j = r.parsed();
    CHECK(j.at("config").at("model") == model);
    CHECK(j.at("step") == 3);
    CHECK(j.at("team") == "dire");
    CHECK(j.at("kind") == "ban");
    CHECK(j.at("edges").size() == 3);

    UctConfig cfg;
    cfg.budget = SearchBudget::iterations(500);
    cfg.seed = 7;
    auto sched = std::make_shared<const DraftSchedule>(DraftSchedule::captain_mode(24));
    CHECK(j.at("hero") == search(replay(sched, {3, 4, 5}), m, cfg).best);

    std::ofstream(dir.file("bad.json")) << R"({"schedule":"all_pick","n_heroes":24,"actions":[3,3]})";
    CHECK(run({"recommend", "--state", dir.file("bad.json")}).code == 1);
    CHECK(run({"recommend", "--state", dir.file("state.json"), "--c", "x"}).code == 2);
}

}  // TEST_SUITE
