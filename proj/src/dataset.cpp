#include "herodraft/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "herodraft/error.hpp"
#include "herodraft/random.hpp"

namespace herodraft {

double MatchDataset::radiant_win_rate() const {
    if (records.empty()) return 0.0;
    std::size_t wins = 0;
    for (const auto& r : records) wins += r.radiant_win;
    return static_cast<double>(wins) / static_cast<double>(records.size());
}

void validate_record(const MatchRecord& r, std::size_t n_heroes) {
    std::vector<bool> seen(n_heroes, false);
    auto check = [&](HeroId h, const char* side) {
        if (h >= n_heroes) {
            throw DataError(std::string(side) + " hero " + std::to_string(h) + " outside pool of " +
                            std::to_string(n_heroes));
        }
        if (seen[h]) throw DataError("hero " + std::to_string(h) + " appears twice in the line-up");
        seen[h] = true;
    };
    for (HeroId h : r.radiant) check(h, "radiant");
    for (HeroId h : r.dire) check(h, "dire");
}

FeatureVector record_features(const MatchRecord& r, std::size_t n_heroes) {
    FeatureVector f(n_heroes, 0.0);
    for (HeroId h : r.radiant) f.at(h) = 1.0;
    for (HeroId h : r.dire) f.at(h) = -1.0;
    return f;
}

namespace {

std::array<HeroId, 5> parse_side(const nlohmann::json& j, const char* key) {
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 5) {
        throw DataError(std::string(key) + " must list exactly 5 heroes");
    }
    std::array<HeroId, 5> out{};
    for (std::size_t i = 0; i < 5; ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<long long>() < 0) {
            throw DataError(std::string(key) + " entries must be non-negative integers");
        }
        out[i] = arr[i].get<HeroId>();
    }
    return out;
}

}  // namespace

MatchDataset load_matches(const std::string& path, std::size_t n_heroes) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open match file " + path);

    MatchDataset ds;
    std::size_t header_heroes = 0;
    std::vector<std::size_t> line_of;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = [&] { return path + ":" + std::to_string(line_no) + ": "; };
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            if (j.contains("format_version")) {
                if (j.at("format_version").get<int>() != 1) {
                    throw DataError("unsupported format_version");
                }
                if (j.contains("n_heroes")) header_heroes = j.at("n_heroes").get<std::size_t>();
                if (!j.contains("radiant")) continue;
            }
            MatchRecord r;
            r.radiant = parse_side(j, "radiant");
            r.dire = parse_side(j, "dire");
            if (!j.at("radiant_win").is_boolean()) throw DataError("radiant_win must be boolean");
            r.radiant_win = j.at("radiant_win").get<bool>();
            // Arity and overlap can be checked before the pool size is known.
            validate_record(r, 1 + std::max(*std::max_element(r.radiant.begin(), r.radiant.end()),
                                            *std::max_element(r.dire.begin(), r.dire.end())));
            ds.records.push_back(r);
            line_of.push_back(line_no);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where() + e.what());
        } catch (const DataError& e) {
            throw DataError(where() + e.what());
        }
    }

    if (n_heroes == 0) n_heroes = header_heroes;
    if (n_heroes == 0) {
        for (const auto& r : ds.records) {
            for (HeroId h : r.radiant) n_heroes = std::max<std::size_t>(n_heroes, h + 1);
            for (HeroId h : r.dire) n_heroes = std::max<std::size_t>(n_heroes, h + 1);
        }
    }
    ds.n_heroes = n_heroes;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        try {
            validate_record(ds.records[i], n_heroes);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_of[i]) + ": " + e.what());
        }
    }
    return ds;
}

void save_matches(const MatchDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write match file " + path);
    out << nlohmann::json{{"format_version", 1}, {"n_heroes", dataset.n_heroes}}.dump() << '\n';
    for (const auto& r : dataset.records) {
        nlohmann::json j;
        j["radiant"] = r.radiant;
        j["dire"] = r.dire;
        j["radiant_win"] = r.radiant_win;
        out << j.dump() << '\n';
    }
}

std::uint64_t dataset_fingerprint(const MatchDataset& dataset) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    feed(dataset.n_heroes);
    for (const auto& r : dataset.records) {
        for (HeroId x : r.radiant) feed(x);
        for (HeroId x : r.dire) feed(x);
        feed(r.radiant_win);
    }
    return h;
}

DatasetSplit split_dataset(const MatchDataset& dataset, double validation_fraction,
                           double test_fraction, std::uint64_t seed) {
    if (validation_fraction < 0 || test_fraction < 0 || validation_fraction + test_fraction >= 1) {
        throw ConfigError("split fractions must be non-negative and sum below 1");
    }
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = dataset.size();
    const auto n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(n));
    const auto n_val = static_cast<std::size_t>(validation_fraction * static_cast<double>(n));

    DatasetSplit split;
    split.train.n_heroes = split.validation.n_heroes = split.test.n_heroes = dataset.n_heroes;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rec = dataset.records[order[i]];
        if (i < n_test) split.test.records.push_back(rec);
        else if (i < n_test + n_val) split.validation.records.push_back(rec);
        else split.train.records.push_back(rec);
    }
    return split;
}

double HeroStats::win_rate(HeroId h) const {
    if (h >= pick_count.size() || pick_count[h] == 0) return 0.0;
    return static_cast<double>(win_count[h]) / static_cast<double>(pick_count[h]);
}

std::vector<double> HeroStats::pick_frequency() const {
    const double total =
        static_cast<double>(std::accumulate(pick_count.begin(), pick_count.end(), std::uint64_t{0}));
    std::vector<double> f(pick_count.size(), 0.0);
    if (total == 0) return f;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(pick_count[i]) / total;
    return f;
}

HeroStats hero_stats(const MatchDataset& dataset) {
    HeroStats s;
    s.pick_count.assign(dataset.n_heroes, 0);
    s.win_count.assign(dataset.n_heroes, 0);
    for (const auto& r : dataset.records) {
        for (HeroId h : r.radiant) {
            ++s.pick_count.at(h);
            s.win_count[h] += r.radiant_win;
        }
        for (HeroId h : r.dire) {
            ++s.pick_count.at(h);
            s.win_count[h] += !r.radiant_win;
        }
    }
    return s;
}

}  // namespace herodraft
