#pragma once

// The drafting game: schedules, states, legal actions and feature encoding.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace herodraft {

using HeroId = std::uint32_t;

enum class Team : std::uint8_t { Radiant, Dire };
enum class ActionKind : std::uint8_t { Pick, Ban };
enum class SlotState : std::uint8_t { Available, PickedRadiant, PickedDire, Banned };

constexpr Team opponent(Team t) { return t == Team::Radiant ? Team::Dire : Team::Radiant; }

std::string_view to_string(Team t);
std::string_view to_string(ActionKind k);
Team parse_team(std::string_view s);
ActionKind parse_action_kind(std::string_view s);

struct Turn {
    Team team;
    ActionKind kind;

    friend bool operator==(const Turn&, const Turn&) = default;
};

/// Ordered list of turns over a hero pool of fixed size.
///
/// Every team must own exactly `picks_per_team` pick turns (5 in real drafts;
/// smaller values exist for exhaustively solvable toy games), and the total
/// number of turns cannot exceed the pool size.
class DraftSchedule {
public:
    DraftSchedule(std::vector<Turn> turns, std::size_t n_heroes, int picks_per_team = 5,
                  std::string name = "custom");

    /// R,D,D,R,R,D,D,R,R,D.
    static DraftSchedule all_pick(std::size_t n_heroes);
    /// 22 turns: 12 bans and 10 picks.
    static DraftSchedule captain_mode(std::size_t n_heroes);
    /// Looks up a preset by name ("all_pick", "captain_mode").
    static DraftSchedule preset(std::string_view name, std::size_t n_heroes);

    const std::vector<Turn>& turns() const { return turns_; }
    std::size_t size() const { return turns_.size(); }
    std::size_t n_heroes() const { return n_heroes_; }
    int picks_per_team() const { return picks_per_team_; }
    int ban_count() const;
    const std::string& name() const { return name_; }

    friend bool operator==(const DraftSchedule& a, const DraftSchedule& b) {
        return a.turns_ == b.turns_ && a.n_heroes_ == b.n_heroes_ &&
               a.picks_per_team_ == b.picks_per_team_;
    }

private:
    std::vector<Turn> turns_;
    std::size_t n_heroes_;
    int picks_per_team_;
    std::string name_;
};

nlohmann::json schedule_to_json(const DraftSchedule& schedule);
DraftSchedule schedule_from_json(const nlohmann::json& j);
DraftSchedule load_schedule(const std::string& path);
void save_schedule(const DraftSchedule& schedule, const std::string& path);

using FeatureVector = std::vector<double>;

/// A position in the draft. Copies are cheap to share: the schedule is held
/// by shared pointer and never mutated.
class DraftState {
public:
    explicit DraftState(std::shared_ptr<const DraftSchedule> schedule);

    const DraftSchedule& schedule() const { return *schedule_; }
    const std::shared_ptr<const DraftSchedule>& schedule_ptr() const { return schedule_; }
    std::size_t n_heroes() const { return slots_.size(); }
    std::size_t step() const { return step_; }
    std::size_t remaining() const { return schedule_->size() - step_; }
    const std::vector<SlotState>& slots() const { return slots_; }
    SlotState slot(HeroId h) const { return slots_.at(h); }

    bool is_terminal() const { return step_ == schedule_->size(); }
    /// Throws NoTurnError on a terminal state.
    Turn turn() const;
    /// Available heroes in increasing id order; empty when terminal.
    std::vector<HeroId> legal_actions() const;
    bool is_legal(HeroId h) const {
        return !is_terminal() && h < slots_.size() && slots_[h] == SlotState::Available;
    }

    /// Returns the successor state; `*this` is unchanged.
    [[nodiscard]] DraftState apply(HeroId hero) const;
    /// In-place variant of apply() for search hot loops.
    void advance(HeroId hero);

    std::vector<HeroId> picks(Team team) const;
    std::vector<HeroId> bans() const;
    FeatureVector encode_features() const;

    friend bool operator==(const DraftState& a, const DraftState& b) {
        return a.step_ == b.step_ && a.slots_ == b.slots_ && *a.schedule_ == *b.schedule_;
    }

private:
    std::shared_ptr<const DraftSchedule> schedule_;
    std::vector<SlotState> slots_;
    std::size_t step_ = 0;
};

DraftState new_draft(DraftSchedule schedule);
DraftState new_draft(std::shared_ptr<const DraftSchedule> schedule);
inline Turn turn(const DraftState& s) { return s.turn(); }
inline std::vector<HeroId> legal_actions(const DraftState& s) { return s.legal_actions(); }
inline DraftState apply(const DraftState& s, HeroId hero) { return s.apply(hero); }
inline bool is_terminal(const DraftState& s) { return s.is_terminal(); }
inline FeatureVector encode_features(const DraftState& s) { return s.encode_features(); }

/// Rebuilds a ban-free state from its features. The pick counts must match a
/// prefix of the schedule, otherwise DataError.
DraftState decode_features(const FeatureVector& features,
                           std::shared_ptr<const DraftSchedule> schedule);

/// Replays an ordered action list from the blank draft.
DraftState replay(std::shared_ptr<const DraftSchedule> schedule, const std::vector<HeroId>& actions);

}  // namespace herodraft
