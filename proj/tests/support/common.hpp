#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "herodraft/draft.hpp"
#include "herodraft/random.hpp"

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(HERODRAFT_FIXTURES) + "/" + name; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("herodraft-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Plays `steps` uniformly random legal actions from the blank draft.
inline herodraft::DraftState random_state(std::shared_ptr<const herodraft::DraftSchedule> schedule, std::size_t steps,
                                          herodraft::Rng& rng) {
    herodraft::DraftState s(std::move(schedule));
    for (std::size_t i = 0; i < steps && !s.is_terminal(); ++i) {
        const auto legal = s.legal_actions();
        s.advance(legal[herodraft::uniform_index(rng, legal.size())]);
    }
    return s;
}

/// Radiant-first two-pick toy schedule R,D,D,R.
inline std::shared_ptr<const herodraft::DraftSchedule> two_v_two(std::size_t n_heroes) {
    using herodraft::ActionKind;
    using herodraft::Team;
    return std::make_shared<const herodraft::DraftSchedule>(
        std::vector<herodraft::Turn>{{Team::Radiant, ActionKind::Pick},
                                     {Team::Dire, ActionKind::Pick},
                                     {Team::Dire, ActionKind::Pick},
                                     {Team::Radiant, ActionKind::Pick}},
        n_heroes, 2, "two_v_two");
}

}  // namespace testing
