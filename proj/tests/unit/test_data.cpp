#include <cmath>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "herodraft/dataset.hpp"
#include "herodraft/error.hpp"
#include "herodraft/truth.hpp"
#include "support/common.hpp"
#include "support/oracles.hpp"

using namespace herodraft;

namespace {

void write_lines(const std::string& path, std::initializer_list<const char*> lines) {
    std::ofstream out(path);
    for (const char* l : lines) out << l << '\n';
}

MatchRecord rec(std::array<HeroId, 5> r, std::array<HeroId, 5> d, bool win) { return {r, d, win}; }

}  // namespace

TEST_SUITE("data") {

TEST_CASE("load_matches reads well-formed files") {
    testing::TempDir dir;
    write_lines(dir.file("m.jsonl"), {
        R"({"radiant":[0,1,2,3,4],"dire":[5,6,7,8,9],"radiant_win":true})",
        R"({"radiant":[10,1,2,3,4],"dire":[5,6,7,8,9],"radiant_win":false})",
        R"({"radiant":[0,1,2,3,11],"dire":[5,6,7,8,9],"radiant_win":true})",
    });
    const MatchDataset ds = load_matches(dir.file("m.jsonl"));
    CHECK(ds.size() == 3);
    CHECK(ds.n_heroes == 12);
    CHECK(ds.records[1].radiant[0] == 10);
    CHECK_FALSE(ds.records[1].radiant_win);
    CHECK(load_matches(dir.file("m.jsonl"), 111).n_heroes == 111);
}

TEST_CASE("load_matches rejects bad rows with their line number") {
    testing::TempDir dir;
    auto expect_error = [&](std::initializer_list<const char*> lines, const std::string& fragment) {
        write_lines(dir.file("bad.jsonl"), lines);
        try {
            (void)load_matches(dir.file("bad.jsonl"));
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    const char* ok = R"({"radiant":[0,1,2,3,4],"dire":[5,6,7,8,9],"radiant_win":true})";
    expect_error({ok, R"({"radiant":[0,1,2,3],"dire":[5,6,7,8,9],"radiant_win":true})"}, ":2:");
    expect_error({ok, ok, R"({"radiant":[0,1,2,3,4],"dire":[4,6,7,8,9],"radiant_win":true})"}, ":3:");
    expect_error({R"({"radiant":[0,1,2,3,4],"dire":[5,6,7,8,9],"radiant_win":1})"}, ":1:");
    expect_error({"not json"}, ":1:");
    expect_error({R"({"format_version":2,"n_heroes":10})", ok}, "format_version");
    CHECK_THROWS_AS(load_matches(dir.file("missing.jsonl")), DataError);
}

TEST_CASE("save then load is the identity") {
    testing::TempDir dir;
    const MatchDataset ds = synth_generate(random_truth({}, 3), 500, 9);
    save_matches(ds, dir.file("d.jsonl"));
    CHECK(load_matches(dir.file("d.jsonl")) == ds);
}

TEST_CASE("hero statistics") {
    MatchDataset ds{12, {}};
    // Hero 0 appears 10 times and is on the winning side 6 times.
    for (int i = 0; i < 10; ++i) ds.records.push_back(rec({0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, i < 6));
    const HeroStats st = hero_stats(ds);
    CHECK(st.pick_count[0] == 10);
    CHECK(st.win_count[0] == 6);
    CHECK(st.win_rate(0) == doctest::Approx(0.6));
    CHECK(st.win_rate(5) == doctest::Approx(0.4));
    CHECK(st.pick_count[11] == 0);
    CHECK(st.win_rate(11) == 0.0);
    CHECK(st.win_rate(500) == 0.0);
    const auto freq = st.pick_frequency();
    CHECK(freq[11] == 0.0);
    CHECK(std::accumulate(freq.begin(), freq.end(), 0.0) == doctest::Approx(1.0));
    CHECK(std::accumulate(st.pick_count.begin(), st.pick_count.end(), std::uint64_t{0}) == 10 * ds.size());

    MatchDataset two{12, {}};
    for (int i = 0; i < 3; ++i) two.records.push_back(rec({0, 2, 3, 4, 5}, {6, 7, 8, 9, 10}, true));
    two.records.push_back(rec({1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}, true));
    const auto f2 = hero_stats(two).pick_frequency();
    CHECK(f2[0] / f2[1] == doctest::Approx(3.0));
}

TEST_CASE("split_dataset partitions deterministically") {
    const MatchDataset ds = synth_generate(random_truth({}, 1), 1000, 2);
    const DatasetSplit a = split_dataset(ds, 0.1, 0.1, 7);
    const DatasetSplit b = split_dataset(ds, 0.1, 0.1, 7);
    CHECK(a.train == b.train);
    CHECK(a.train.size() + a.validation.size() + a.test.size() == 1000);
    CHECK(a.validation.size() == 100);
    CHECK(a.test.size() == 100);
    CHECK_THROWS_AS(split_dataset(ds, 0.6, 0.5, 1), ConfigError);
}

TEST_CASE("ground truth: hand-evaluated synergy") {
    GroundTruthModel t = zero_truth(12);
    t.set_synergy(1, 2, 2.0);
    const std::array<HeroId, 5> r{1, 2, 3, 4, 5};
    const std::array<HeroId, 5> d{6, 7, 8, 9, 10};
    CHECK(t.win_prob(r, d) == doctest::Approx(0.8807970779778823).epsilon(1e-12));
    CHECK(t.win_prob(d, r) == doctest::Approx(1.0 - 0.8807970779778823).epsilon(1e-12));
    t.noise_scale = 2.0;
    CHECK(t.win_prob(r, d) == doctest::Approx(oracle::sigmoid(1.0)));
}

TEST_CASE("ground truth logit matches a direct sum") {
    const GroundTruthModel t = random_truth({}, 4);
    t.validate();
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<HeroId> pool(t.n_heroes);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::array<HeroId, 5> r, d;
        std::copy_n(pool.begin(), 5, r.begin());
        std::copy_n(pool.begin() + 5, 5, d.begin());
        double z = 0;
        for (HeroId a : r) z += t.base[a];
        for (HeroId a : d) z -= t.base[a];
        for (int i = 0; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) {
                z += t.synergy[r[i] * t.n_heroes + r[j]];
                z -= t.synergy[d[i] * t.n_heroes + d[j]];
            }
            for (int j = 0; j < 5; ++j) z += t.opposition[r[i] * t.n_heroes + d[j]];
        }
        CHECK(t.logit(r, d) == doctest::Approx(z).epsilon(1e-12));
        CHECK(t.win_prob(r, d) + t.win_prob(d, r) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("random truth follows its configuration") {
    RandomTruthConfig cfg;
    const GroundTruthModel t = random_truth(cfg, 42);
    CHECK(t.n_heroes == 20);
    for (double b : t.base) CHECK(std::abs(b) <= 0.3);
    std::size_t syn = 0, opp = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = i + 1; j < 20; ++j) {
            if (t.synergy_at(i, j) != 0) {
                ++syn;
                CHECK(std::abs(t.synergy_at(i, j)) == 1.0);
            }
            if (t.opposition_at(i, j) != 0) {
                ++opp;
                CHECK(t.opposition_at(j, i) == -t.opposition_at(i, j));
            }
        }
    }
    CHECK(syn == 10);
    CHECK(opp == 10);
    CHECK(random_truth(cfg, 42).base == t.base);
}

TEST_CASE("versioned fixture loads and validates") {
    const GroundTruthModel t = load_truth(testing::fixture("truth_n20.json"));
    CHECK(t.n_heroes == 20);
    CHECK(t.noise_scale == 1.0);
    t.validate();
    testing::TempDir dir;
    save_truth(t, dir.file("t.json"));
    const GroundTruthModel back = load_truth(dir.file("t.json"));
    CHECK(back.base == t.base);
    CHECK(back.synergy == t.synergy);
    CHECK(back.opposition == t.opposition);
}

TEST_CASE("synth_generate: null model, determinism, preconditions") {
    const MatchDataset ds = synth_generate(zero_truth(20), 10000, 1);
    CHECK(ds.radiant_win_rate() == doctest::Approx(0.5).epsilon(0.04));
    for (const auto& r : ds.records) validate_record(r, 20);
    CHECK(synth_generate(zero_truth(20), 100, 5) == synth_generate(zero_truth(20), 100, 5));
    CHECK_FALSE(synth_generate(zero_truth(20), 100, 5) == synth_generate(zero_truth(20), 100, 6));
    CHECK_THROWS_AS(synth_generate(zero_truth(9), 10, 1), ConfigError);

    const GroundTruthModel t = random_truth({}, 8);
    const double a = synth_generate(t, 20000, 1).radiant_win_rate();
    const double b = synth_generate(t, 20000, 2).radiant_win_rate();
    CHECK(std::abs(a - b) < 0.03);
}

TEST_CASE("a dominant hero wins as often as the model says") {
    GroundTruthModel t = random_truth({}, 12);
    t.base[0] = 2.0;
    const HeroStats st = hero_stats(synth_generate(t, 40000, 3));

    // Expected win probability of hero 0's side, by Monte Carlo over fresh
    // random line-ups containing it.
    Rng rng(999);
    double sum = 0;
    const int samples = 40000;
    for (int i = 0; i < samples; ++i) {
        std::vector<HeroId> pool(t.n_heroes - 1);
        std::iota(pool.begin(), pool.end(), 1);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::array<HeroId, 5> mine{0, pool[0], pool[1], pool[2], pool[3]};
        std::array<HeroId, 5> theirs{pool[4], pool[5], pool[6], pool[7], pool[8]};
        sum += t.win_prob(mine, theirs);
    }
    const double expected = sum / samples;
    CHECK(expected > 0.7);
    CHECK(st.win_rate(0) == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("true_win_prob on drafts") {
    auto sched = std::make_shared<const DraftSchedule>(DraftSchedule::all_pick(12));
    const DraftState done = replay(sched, {1, 6, 7, 2, 3, 8, 9, 4, 5, 10});
    CHECK(true_win_prob(zero_truth(12), done) == 0.5);
    GroundTruthModel t = zero_truth(12);
    t.set_synergy(1, 2, 2.0);
    CHECK(true_win_prob(t, done) == doctest::Approx(0.8807970779778823));
    CHECK(TruthReward(t).evaluate(done) == true_win_prob(t, done));
    // Mirror: same heroes with sides exchanged.
    const DraftState mirror = replay(sched, {6, 1, 2, 7, 8, 3, 4, 9, 10, 5});
    CHECK(true_win_prob(t, done) + true_win_prob(t, mirror) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(true_win_prob(t, new_draft(sched)), QueryError);
    CHECK_THROWS_AS(true_win_prob(zero_truth(13), done), DataError);
}

}  // TEST_SUITE
