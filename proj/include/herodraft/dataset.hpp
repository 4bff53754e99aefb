#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "herodraft/draft.hpp"

namespace herodraft {

struct MatchRecord {
    std::array<HeroId, 5> radiant{};
    std::array<HeroId, 5> dire{};
    bool radiant_win = false;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct MatchDataset {
    std::size_t n_heroes = 0;
    std::vector<MatchRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    double radiant_win_rate() const;

    friend bool operator==(const MatchDataset&, const MatchDataset&) = default;
};

/// Throws DataError if the record breaks the line-up rules or references a
/// hero outside [0, n_heroes).
void validate_record(const MatchRecord& r, std::size_t n_heroes);

/// Features of a record in the {-1, 0, 1} encoding.
FeatureVector record_features(const MatchRecord& r, std::size_t n_heroes);

/// JSONL: an optional header line {"format_version":1,"n_heroes":N} followed by
/// one {"radiant":[..5],"dire":[..5],"radiant_win":bool} object per line.
/// Without a header, n_heroes defaults to max id + 1 unless `n_heroes` > 0.
MatchDataset load_matches(const std::string& path, std::size_t n_heroes = 0);
void save_matches(const MatchDataset& dataset, const std::string& path);

/// FNV-1a over the records, for provenance in model files.
std::uint64_t dataset_fingerprint(const MatchDataset& dataset);

struct DatasetSplit {
    MatchDataset train;
    MatchDataset validation;
    MatchDataset test;
};

/// Seeded shuffle, then consecutive blocks of the given fractions.
DatasetSplit split_dataset(const MatchDataset& dataset, double validation_fraction,
                           double test_fraction, std::uint64_t seed);

struct HeroStats {
    std::vector<std::uint64_t> pick_count;
    std::vector<std::uint64_t> win_count;

    std::size_t n_heroes() const { return pick_count.size(); }
    /// 0 for heroes that never appear.
    double win_rate(HeroId h) const;
    /// Appearances normalised over all appearances; 0 for absent heroes.
    std::vector<double> pick_frequency() const;
};

HeroStats hero_stats(const MatchDataset& dataset);

}  // namespace herodraft
