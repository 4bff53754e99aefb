#pragma once

// Draft-session service: in-memory sessions fed by a live draft, with
// recommendation and what-if queries, exposed as JSON over HTTP.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "herodraft/draft.hpp"
#include "herodraft/error.hpp"
#include "herodraft/reward.hpp"
#include "herodraft/uct.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace herodraft {

/// Error surfaced to HTTP clients: status, machine-readable code and,
/// for rejected actions, the legal set.
class ServiceError : public Error {
public:
    ServiceError(int status, std::string code, const std::string& message,
                 std::optional<std::vector<HeroId>> legal = std::nullopt)
        : Error(message), status_(status), code_(std::move(code)), legal_(std::move(legal)) {}

    int status() const { return status_; }
    const std::string& code() const { return code_; }
    const std::optional<std::vector<HeroId>>& legal() const { return legal_; }
    nlohmann::json body() const;

private:
    int status_;
    std::string code_;
    std::optional<std::vector<HeroId>> legal_;
};

struct ServiceConfig {
    /// Reward models by id, shared read-only between sessions.
    std::map<std::string, std::shared_ptr<const RewardFunction>> models;
    std::string default_model = "default";
    /// Display names; missing entries fall back to "Hero <id>".
    std::vector<std::string> hero_names;
    /// Search settings for sessions that do not bring their own.
    UctConfig default_uct{};
    /// Upper bound on any iteration budget a client may request.
    std::uint64_t max_iterations = 200000;
    /// Hard wall-clock cap on every search.
    std::chrono::milliseconds search_time_cap{20000};
    /// Memory guard for search trees.
    std::size_t max_nodes = 5'000'000;
    std::size_t default_top_k = 10;
    /// Append-only session log; empty disables persistence.
    std::string log_path;
    /// Directory served under "/" (the UI bundle); empty disables.
    std::string static_dir;
};

struct HistoryEntry {
    HeroId hero = 0;
    std::int64_t timestamp_ms = 0;
};

struct DraftSession {
    DraftSession(std::string session_id, std::shared_ptr<const DraftSchedule> sched)
        : id(std::move(session_id)), schedule(sched), state(std::move(sched)) {}

    std::string id;
    std::shared_ptr<const DraftSchedule> schedule;
    DraftState state;
    Team assisted_team = Team::Radiant;
    std::vector<HistoryEntry> history;
    UctConfig uct;
    std::string model_id;
    std::shared_ptr<const RewardFunction> model;
    mutable std::mutex mutex;
};

struct RecommendOptions {
    std::optional<std::uint64_t> iterations;
    std::optional<double> exploration_c;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> top_k;
};

/// Stable digest of a draft position, used to prove read endpoints leave
/// sessions untouched.
std::uint64_t state_hash(const DraftState& state);

class DraftService {
public:
    /// Replays `config.log_path` when it exists.
    explicit DraftService(ServiceConfig config);

    /// Body: {"schedule": name | schedule object, "assisted_team", "model",
    ///        "uct": {"iterations", "c", "seed"}}; every field optional.
    nlohmann::json create_session(const nlohmann::json& request);
    nlohmann::json get_session(const std::string& id) const;
    nlohmann::json record_action(const std::string& id, HeroId hero);
    nlohmann::json recommend(const std::string& id, const RecommendOptions& options = {}) const;
    nlohmann::json what_if(const std::string& id, HeroId hero, const RecommendOptions& options = {}) const;
    nlohmann::json heroes(const std::string& model_id = {}) const;
    nlohmann::json health() const;

    std::size_t session_count() const;
    const ServiceConfig& config() const { return config_; }

private:
    std::shared_ptr<DraftSession> find(const std::string& id) const;
    std::shared_ptr<const RewardFunction> model(const std::string& id) const;
    UctConfig search_config(const DraftSession& s, const RecommendOptions& options) const;
    nlohmann::json view(const DraftSession& s) const;
    std::string hero_name(HeroId h) const;
    std::string next_id();
    void append_log(const nlohmann::json& entry);
    void recover();
    std::shared_ptr<DraftSession> open_session(const std::string& id, const nlohmann::json& request);

    ServiceConfig config_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<DraftSession>> sessions_;
    std::uint64_t id_nonce_;
    std::uint64_t id_counter_ = 0;
    std::mutex log_mutex_;
    std::ofstream log_;
};

/// Registers the JSON API, GET /heroes, GET /healthz and the static mount.
void mount_routes(httplib::Server& server, DraftService& service);

/// Blocks serving on host:port until the process is stopped.
void serve(DraftService& service, const std::string& host, int port);

}  // namespace herodraft
