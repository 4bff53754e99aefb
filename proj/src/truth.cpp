#include "herodraft/truth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "herodraft/error.hpp"
#include "herodraft/random.hpp"

namespace herodraft {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void GroundTruthModel::set_synergy(HeroId i, HeroId j, double v) {
    if (i == j) throw ConfigError("synergy needs two distinct heroes");
    synergy.at(i * n_heroes + j) = v;
    synergy.at(j * n_heroes + i) = v;
}

void GroundTruthModel::set_opposition(HeroId r, HeroId d, double v) {
    if (r == d) throw ConfigError("opposition needs two distinct heroes");
    opposition.at(r * n_heroes + d) = v;
    opposition.at(d * n_heroes + r) = -v;
}

double GroundTruthModel::logit(std::span<const HeroId> radiant, std::span<const HeroId> dire) const {
    double z = 0.0;
    for (HeroId r : radiant) z += base[r];
    for (HeroId d : dire) z -= base[d];
    for (std::size_t a = 0; a < radiant.size(); ++a) {
        for (std::size_t b = a + 1; b < radiant.size(); ++b) z += synergy_at(radiant[a], radiant[b]);
    }
    for (std::size_t a = 0; a < dire.size(); ++a) {
        for (std::size_t b = a + 1; b < dire.size(); ++b) z -= synergy_at(dire[a], dire[b]);
    }
    for (HeroId r : radiant) {
        for (HeroId d : dire) z += opposition_at(r, d);
    }
    return z;
}

double GroundTruthModel::win_prob(std::span<const HeroId> radiant, std::span<const HeroId> dire) const {
    return sigmoid(logit(radiant, dire) / noise_scale);
}

void GroundTruthModel::validate() const {
    const auto n = n_heroes;
    if (base.size() != n || synergy.size() != n * n || opposition.size() != n * n) {
        throw ConfigError("ground truth parameter blocks do not match n_heroes");
    }
    if (!(noise_scale > 0)) throw ConfigError("noise_scale must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        if (synergy[i * n + i] != 0 || opposition[i * n + i] != 0) {
            throw ConfigError("ground truth diagonal must be zero");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (synergy[i * n + j] != synergy[j * n + i]) throw ConfigError("synergy is not symmetric");
            if (opposition[i * n + j] != -opposition[j * n + i]) {
                throw ConfigError("opposition is not antisymmetric");
            }
        }
    }
}

GroundTruthModel zero_truth(std::size_t n_heroes) {
    GroundTruthModel t;
    t.n_heroes = n_heroes;
    t.base.assign(n_heroes, 0.0);
    t.synergy.assign(n_heroes * n_heroes, 0.0);
    t.opposition.assign(n_heroes * n_heroes, 0.0);
    return t;
}

GroundTruthModel random_truth(const RandomTruthConfig& config, std::uint64_t seed) {
    const auto n = config.n_heroes;
    if (n < 2) throw ConfigError("random truth needs at least two heroes");
    const std::size_t max_pairs = n * (n - 1) / 2;
    if (config.synergy_pairs > max_pairs || config.opposition_pairs > max_pairs) {
        throw ConfigError("more interaction pairs requested than hero pairs exist");
    }
    GroundTruthModel t = zero_truth(n);
    t.noise_scale = config.noise_scale;
    t.seed = seed;
    Rng rng(seed);
    for (auto& b : t.base) b = uniform_real(rng, -config.base_range, config.base_range);

    auto random_pairs = [&](std::size_t count) {
        std::vector<std::pair<HeroId, HeroId>> all;
        for (HeroId i = 0; i < n; ++i) {
            for (HeroId j = i + 1; j < n; ++j) all.emplace_back(i, j);
        }
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(count);
        return all;
    };
    auto sign = [&] { return uniform_index(rng, 2) == 0 ? 1.0 : -1.0; };
    for (auto [i, j] : random_pairs(config.synergy_pairs)) {
        t.set_synergy(i, j, sign() * config.pair_strength);
    }
    for (auto [i, j] : random_pairs(config.opposition_pairs)) {
        t.set_opposition(i, j, sign() * config.pair_strength);
    }
    return t;
}

nlohmann::json truth_to_json(const GroundTruthModel& truth) {
    const auto n = truth.n_heroes;
    nlohmann::json syn = nlohmann::json::array();
    nlohmann::json opp = nlohmann::json::array();
    for (HeroId i = 0; i < n; ++i) {
        for (HeroId j = i + 1; j < n; ++j) {
            if (truth.synergy_at(i, j) != 0) syn.push_back({i, j, truth.synergy_at(i, j)});
            if (truth.opposition_at(i, j) != 0) opp.push_back({i, j, truth.opposition_at(i, j)});
        }
    }
    return {{"format_version", 1}, {"n_heroes", n},       {"noise_scale", truth.noise_scale},
            {"seed", truth.seed},  {"base", truth.base}, {"synergy", syn},
            {"opposition", opp}};
}

GroundTruthModel truth_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<int>() != 1) throw ConfigError("unsupported truth format_version");
        GroundTruthModel t = zero_truth(j.at("n_heroes").get<std::size_t>());
        t.noise_scale = j.at("noise_scale").get<double>();
        t.seed = j.value("seed", std::uint64_t{0});
        t.base = j.at("base").get<std::vector<double>>();
        if (t.base.size() != t.n_heroes) throw ConfigError("base has wrong length");
        auto check = [&](HeroId a, HeroId b) {
            if (a >= t.n_heroes || b >= t.n_heroes) throw ConfigError("pair index outside pool");
        };
        for (const auto& e : j.at("synergy")) {
            check(e.at(0), e.at(1));
            t.set_synergy(e.at(0).get<HeroId>(), e.at(1).get<HeroId>(), e.at(2).get<double>());
        }
        for (const auto& e : j.at("opposition")) {
            check(e.at(0), e.at(1));
            t.set_opposition(e.at(0).get<HeroId>(), e.at(1).get<HeroId>(), e.at(2).get<double>());
        }
        t.validate();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed ground truth: ") + e.what());
    }
}

GroundTruthModel load_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open truth file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return truth_from_json(j);
}

void save_truth(const GroundTruthModel& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write truth file " + path);
    out << truth_to_json(truth).dump(2) << '\n';
}

MatchDataset synth_generate(const GroundTruthModel& truth, std::size_t n_matches, std::uint64_t seed) {
    if (truth.n_heroes < 10) {
        throw ConfigError("need at least 10 heroes to form two disjoint line-ups");
    }
    if (n_matches < 1) throw ConfigError("n_matches must be at least 1");
    MatchDataset ds;
    ds.n_heroes = truth.n_heroes;
    ds.records.reserve(n_matches);
    Rng rng(seed);
    std::vector<HeroId> pool(truth.n_heroes);
    std::iota(pool.begin(), pool.end(), HeroId{0});
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t m = 0; m < n_matches; ++m) {
        // Partial Fisher-Yates: the first ten entries are a uniform 10-subset
        // in uniform order.
        for (std::size_t i = 0; i < 10; ++i) {
            std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
        }
        MatchRecord r;
        std::copy_n(pool.begin(), 5, r.radiant.begin());
        std::copy_n(pool.begin() + 5, 5, r.dire.begin());
        r.radiant_win = coin(rng) < truth.win_prob(r.radiant, r.dire);
        ds.records.push_back(r);
    }
    return ds;
}

double true_win_prob(const GroundTruthModel& truth, const DraftState& terminal) {
    if (!terminal.is_terminal()) throw QueryError("true_win_prob needs a terminal draft");
    if (terminal.n_heroes() != truth.n_heroes) {
        throw DataError("draft pool size does not match the ground truth");
    }
    const auto r = terminal.picks(Team::Radiant);
    const auto d = terminal.picks(Team::Dire);
    return truth.win_prob(r, d);
}

}  // namespace herodraft
