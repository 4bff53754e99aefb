#include "herodraft/draft.hpp"

#include <fstream>

#include "herodraft/error.hpp"

namespace herodraft {

std::string_view to_string(Team t) { return t == Team::Radiant ? "radiant" : "dire"; }
std::string_view to_string(ActionKind k) { return k == ActionKind::Pick ? "pick" : "ban"; }

Team parse_team(std::string_view s) {
    if (s == "radiant") return Team::Radiant;
    if (s == "dire") return Team::Dire;
    throw ConfigError("unknown team '" + std::string(s) + "'");
}

ActionKind parse_action_kind(std::string_view s) {
    if (s == "pick") return ActionKind::Pick;
    if (s == "ban") return ActionKind::Ban;
    throw ConfigError("unknown action kind '" + std::string(s) + "'");
}

DraftSchedule::DraftSchedule(std::vector<Turn> turns, std::size_t n_heroes, int picks_per_team,
                             std::string name)
    : turns_(std::move(turns)),
      n_heroes_(n_heroes),
      picks_per_team_(picks_per_team),
      name_(std::move(name)) {
    if (picks_per_team_ < 1) throw ConfigError("picks_per_team must be positive");
    int radiant = 0;
    int dire = 0;
    for (const Turn& t : turns_) {
        if (t.kind != ActionKind::Pick) continue;
        (t.team == Team::Radiant ? radiant : dire)++;
    }
    if (radiant != picks_per_team_ || dire != picks_per_team_) {
        throw ConfigError("schedule must give each team exactly " + std::to_string(picks_per_team_) +
                          " picks (radiant " + std::to_string(radiant) + ", dire " +
                          std::to_string(dire) + ")");
    }
    if (turns_.size() > n_heroes_) {
        throw ConfigError("schedule has " + std::to_string(turns_.size()) + " turns but only " +
                          std::to_string(n_heroes_) + " heroes");
    }
}

DraftSchedule DraftSchedule::all_pick(std::size_t n_heroes) {
    constexpr Team R = Team::Radiant;
    constexpr Team D = Team::Dire;
    std::vector<Turn> turns;
    for (Team t : {R, D, D, R, R, D, D, R, R, D}) turns.push_back({t, ActionKind::Pick});
    return DraftSchedule(std::move(turns), n_heroes, 5, "all_pick");
}

DraftSchedule DraftSchedule::captain_mode(std::size_t n_heroes) {
    constexpr Team R = Team::Radiant;
    constexpr Team D = Team::Dire;
    std::vector<Turn> turns;
    auto add = [&](ActionKind kind, std::initializer_list<Team> teams) {
        for (Team t : teams) turns.push_back({t, kind});
    };
    add(ActionKind::Ban, {R, D, R, D, R, D});
    add(ActionKind::Pick, {R, D, D, R});
    add(ActionKind::Ban, {R, D, R, D});
    add(ActionKind::Pick, {D, R, R, D});
    add(ActionKind::Ban, {R, D});
    add(ActionKind::Pick, {D, R});
    return DraftSchedule(std::move(turns), n_heroes, 5, "captain_mode");
}

DraftSchedule DraftSchedule::preset(std::string_view name, std::size_t n_heroes) {
    if (name == "all_pick") return all_pick(n_heroes);
    if (name == "captain_mode") return captain_mode(n_heroes);
    throw ConfigError("unknown schedule preset '" + std::string(name) + "'");
}

int DraftSchedule::ban_count() const {
    int n = 0;
    for (const Turn& t : turns_) n += t.kind == ActionKind::Ban;
    return n;
}

nlohmann::json schedule_to_json(const DraftSchedule& schedule) {
    nlohmann::json turns = nlohmann::json::array();
    for (const Turn& t : schedule.turns()) {
        turns.push_back({{"team", to_string(t.team)}, {"kind", to_string(t.kind)}});
    }
    return {{"format_version", 1},
            {"name", schedule.name()},
            {"n_heroes", schedule.n_heroes()},
            {"picks_per_team", schedule.picks_per_team()},
            {"turns", turns}};
}

DraftSchedule schedule_from_json(const nlohmann::json& j) {
    try {
        if (j.contains("format_version") && j.at("format_version").get<int>() != 1) {
            throw ConfigError("unsupported schedule format_version");
        }
        std::vector<Turn> turns;
        for (const auto& t : j.at("turns")) {
            turns.push_back({parse_team(t.at("team").get<std::string>()),
                             parse_action_kind(t.at("kind").get<std::string>())});
        }
        return DraftSchedule(std::move(turns), j.at("n_heroes").get<std::size_t>(),
                             j.value("picks_per_team", 5), j.value("name", std::string("custom")));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schedule: ") + e.what());
    }
}

DraftSchedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open schedule file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("schedule file " + path + ": " + e.what());
    }
    return schedule_from_json(j);
}

void save_schedule(const DraftSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write schedule file " + path);
    out << schedule_to_json(schedule).dump(2) << '\n';
}

DraftState::DraftState(std::shared_ptr<const DraftSchedule> schedule)
    : schedule_(std::move(schedule)), slots_(schedule_->n_heroes(), SlotState::Available) {}

Turn DraftState::turn() const {
    if (is_terminal()) throw NoTurnError("draft is complete; no team is to act");
    return schedule_->turns()[step_];
}

std::vector<HeroId> DraftState::legal_actions() const {
    std::vector<HeroId> out;
    if (is_terminal()) return out;
    out.reserve(slots_.size() - step_);
    for (HeroId h = 0; h < slots_.size(); ++h) {
        if (slots_[h] == SlotState::Available) out.push_back(h);
    }
    return out;
}

DraftState DraftState::apply(HeroId hero) const {
    DraftState next = *this;
    next.advance(hero);
    return next;
}

void DraftState::advance(HeroId hero) {
    if (is_terminal()) throw IllegalActionError("draft is complete");
    if (hero >= slots_.size()) {
        throw IllegalActionError("hero " + std::to_string(hero) + " outside pool of " +
                                 std::to_string(slots_.size()));
    }
    if (slots_[hero] != SlotState::Available) {
        throw IllegalActionError("hero " + std::to_string(hero) + " is not available");
    }
    const Turn t = schedule_->turns()[step_];
    if (t.kind == ActionKind::Ban) {
        slots_[hero] = SlotState::Banned;
    } else {
        slots_[hero] = t.team == Team::Radiant ? SlotState::PickedRadiant : SlotState::PickedDire;
    }
    ++step_;
}

std::vector<HeroId> DraftState::picks(Team team) const {
    const SlotState want = team == Team::Radiant ? SlotState::PickedRadiant : SlotState::PickedDire;
    std::vector<HeroId> out;
    for (HeroId h = 0; h < slots_.size(); ++h) {
        if (slots_[h] == want) out.push_back(h);
    }
    return out;
}

std::vector<HeroId> DraftState::bans() const {
    std::vector<HeroId> out;
    for (HeroId h = 0; h < slots_.size(); ++h) {
        if (slots_[h] == SlotState::Banned) out.push_back(h);
    }
    return out;
}

FeatureVector DraftState::encode_features() const {
    FeatureVector f(slots_.size(), 0.0);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i] == SlotState::PickedRadiant) f[i] = 1.0;
        else if (slots_[i] == SlotState::PickedDire) f[i] = -1.0;
    }
    return f;
}

DraftState new_draft(DraftSchedule schedule) {
    return DraftState(std::make_shared<const DraftSchedule>(std::move(schedule)));
}

DraftState new_draft(std::shared_ptr<const DraftSchedule> schedule) {
    return DraftState(std::move(schedule));
}

DraftState decode_features(const FeatureVector& features,
                           std::shared_ptr<const DraftSchedule> schedule) {
    if (features.size() != schedule->n_heroes()) {
        throw DataError("feature vector has length " + std::to_string(features.size()) +
                        ", schedule expects " + std::to_string(schedule->n_heroes()));
    }
    std::vector<HeroId> radiant;
    std::vector<HeroId> dire;
    for (HeroId h = 0; h < features.size(); ++h) {
        if (features[h] == 1.0) radiant.push_back(h);
        else if (features[h] == -1.0) dire.push_back(h);
        else if (features[h] != 0.0) throw DataError("feature values must be in {-1, 0, 1}");
    }
    // Hand the heroes out in schedule order; any mismatch with the turn
    // sequence means the vector is not a reachable ban-free state.
    DraftState state(std::move(schedule));
    std::size_t ri = 0;
    std::size_t di = 0;
    while (ri < radiant.size() || di < dire.size()) {
        if (state.is_terminal()) throw DataError("too many picks for schedule");
        const Turn t = state.turn();
        if (t.kind == ActionKind::Ban) throw DataError("ban-free decode reached a ban turn");
        if (t.team == Team::Radiant) {
            if (ri == radiant.size()) throw DataError("pick counts do not match a schedule prefix");
            state.advance(radiant[ri++]);
        } else {
            if (di == dire.size()) throw DataError("pick counts do not match a schedule prefix");
            state.advance(dire[di++]);
        }
    }
    return state;
}

DraftState replay(std::shared_ptr<const DraftSchedule> schedule, const std::vector<HeroId>& actions) {
    DraftState state(std::move(schedule));
    for (HeroId h : actions) state.advance(h);
    return state;
}

}  // namespace herodraft
