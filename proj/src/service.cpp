#include "herodraft/service.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <random>

#include "herodraft/random.hpp"
#include "httplib.h"

namespace herodraft {

using nlohmann::json;

nlohmann::json ServiceError::body() const {
    json j = {{"error", {{"code", code_}, {"message", what()}}}};
    if (legal_) j["error"]["legal"] = *legal_;
    return j;
}

std::uint64_t state_hash(const DraftState& state) {
    std::uint64_t h = derive_seed(state.n_heroes(), state.step(), state.schedule().size());
    for (SlotState s : state.slots()) h = mix64(h ^ static_cast<std::uint64_t>(s));
    return h;
}

namespace {

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

ServiceError not_found(const std::string& what, const std::string& id) {
    return ServiceError(404, "unknown_" + what, "no " + what + " '" + id + "'");
}

ServiceError draft_complete() { return ServiceError(409, "draft_complete", "the draft is already complete"); }

ServiceError illegal(const DraftState& state, HeroId hero) {
    std::string why = hero >= state.n_heroes() ? "does not exist" : "is not available";
    return ServiceError(409, "illegal_action", "hero " + std::to_string(hero) + " " + why, state.legal_actions());
}

ServiceError bad_request(const std::string& message) { return ServiceError(400, "bad_request", message); }

json uct_json(const UctConfig& c) {
    json j = {{"c", c.exploration_c}, {"seed", c.seed}};
    if (c.budget.kind == SearchBudget::Kind::Iterations) {
        j["iterations"] = c.budget.amount;
    } else {
        j["time_ms"] = c.budget.amount;
    }
    return j;
}

}  // namespace

DraftService::DraftService(ServiceConfig config) : config_(std::move(config)) {
    if (config_.models.empty()) throw ConfigError("service needs at least one reward model");
    if (!config_.models.count(config_.default_model)) {
        throw ConfigError("default model '" + config_.default_model + "' is not loaded");
    }
    config_.default_uct.validate();
    id_nonce_ = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    if (!config_.log_path.empty()) {
        recover();
        log_.open(config_.log_path, std::ios::app);
        if (!log_) throw DataError("cannot open session log " + config_.log_path);
    }
}

std::shared_ptr<DraftSession> DraftService::find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw not_found("session", id);
    return it->second;
}

std::shared_ptr<const RewardFunction> DraftService::model(const std::string& id) const {
    auto it = config_.models.find(id.empty() ? config_.default_model : id);
    if (it == config_.models.end()) throw not_found("model", id);
    return it->second;
}

std::string DraftService::hero_name(HeroId h) const {
    if (h < config_.hero_names.size() && !config_.hero_names[h].empty()) return config_.hero_names[h];
    return "Hero " + std::to_string(h);
}

std::string DraftService::next_id() {
    std::unique_lock lock(sessions_mutex_);
    while (true) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(derive_seed(id_nonce_, ++id_counter_)));
        if (!sessions_.count(buf)) return buf;
    }
}

std::shared_ptr<DraftSession> DraftService::open_session(const std::string& id, const json& request) {
    if (!request.is_object()) throw bad_request("session request must be a JSON object");
    const std::string model_id = request.value("model", config_.default_model);
    auto reward = model(model_id);

    std::shared_ptr<const DraftSchedule> schedule;
    try {
        const json sched = request.value("schedule", json("all_pick"));
        if (sched.is_string()) {
            schedule = std::make_shared<const DraftSchedule>(
                DraftSchedule::preset(sched.get<std::string>(), reward->n_features()));
        } else {
            schedule = std::make_shared<const DraftSchedule>(schedule_from_json(sched));
        }
    } catch (const ServiceError&) {
        throw;
    } catch (const std::exception& e) {
        throw bad_request(std::string("invalid schedule: ") + e.what());
    }
    if (schedule->n_heroes() != reward->n_features()) {
        throw bad_request("schedule has " + std::to_string(schedule->n_heroes()) + " heroes, model '" + model_id +
                          "' expects " + std::to_string(reward->n_features()));
    }

    auto s = std::make_shared<DraftSession>(id, schedule);
    s->model_id = model_id;
    s->model = std::move(reward);
    try {
        s->assisted_team = parse_team(request.value("assisted_team", std::string("radiant")));
        s->uct = config_.default_uct;
        if (request.contains("uct")) {
            const json& u = request.at("uct");
            if (u.contains("iterations")) {
                s->uct.budget = SearchBudget::iterations(
                    std::min(u.at("iterations").get<std::uint64_t>(), config_.max_iterations));
            }
            if (u.contains("c")) s->uct.exploration_c = u.at("c").get<double>();
            if (u.contains("seed")) s->uct.seed = u.at("seed").get<std::uint64_t>();
        }
        s->uct.validate();
    } catch (const json::exception& e) {
        throw bad_request(e.what());
    } catch (const ConfigError& e) {
        throw bad_request(e.what());
    }
    return s;
}

nlohmann::json DraftService::create_session(const json& request) {
    const std::string id = next_id();
    auto s = open_session(id, request.is_null() ? json::object() : request);
    json entry = {{"op", "create"},
                  {"id", id},
                  {"ts", now_ms()},
                  {"request",
                   {{"model", s->model_id},
                    {"schedule", schedule_to_json(*s->schedule)},
                    {"assisted_team", to_string(s->assisted_team)},
                    {"uct", uct_json(s->uct)}}}};
    json out;
    {
        std::lock_guard session_lock(s->mutex);
        {
            std::unique_lock lock(sessions_mutex_);
            sessions_.emplace(id, s);
        }
        append_log(entry);
        out = view(*s);
    }
    return out;
}

nlohmann::json DraftService::get_session(const std::string& id) const {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    return view(*s);
}

nlohmann::json DraftService::record_action(const std::string& id, HeroId hero) {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (s->state.is_terminal()) throw draft_complete();
    if (!s->state.is_legal(hero)) throw illegal(s->state, hero);

    const std::size_t step = s->state.step();
    s->state.advance(hero);
    s->history.push_back({hero, now_ms()});

    std::vector<HeroId> actions;
    for (const auto& h : s->history) actions.push_back(h.hero);
    if (!(replay(s->schedule, actions) == s->state)) {
        throw ServiceError(500, "state_divergence", "session state does not match its history");
    }
    append_log({{"op", "action"}, {"id", id}, {"step", step}, {"hero", hero}, {"ts", s->history.back().timestamp_ms}});
    return view(*s);
}

UctConfig DraftService::search_config(const DraftSession& s, const RecommendOptions& o) const {
    UctConfig cfg = s.uct;
    if (o.iterations) {
        if (*o.iterations < 1) throw bad_request("iterations must be positive");
        cfg.budget = SearchBudget::iterations(std::min(*o.iterations, config_.max_iterations));
    }
    if (o.exploration_c) {
        if (!(*o.exploration_c >= 0)) throw bad_request("c must be non-negative");
        cfg.exploration_c = *o.exploration_c;
    }
    if (o.seed) cfg.seed = *o.seed;
    if (cfg.budget.kind == SearchBudget::Kind::WallClock) {
        cfg.budget.amount = std::min<std::uint64_t>(cfg.budget.amount, config_.search_time_cap.count());
    }
    cfg.time_cap = config_.search_time_cap;
    cfg.max_nodes = config_.max_nodes;
    return cfg;
}

nlohmann::json DraftService::recommend(const std::string& id, const RecommendOptions& options) const {
    auto s = find(id);
    std::optional<DraftState> state;
    UctConfig cfg;
    std::shared_ptr<const RewardFunction> reward;
    Team assisted;
    {
        std::lock_guard lock(s->mutex);
        if (s->state.is_terminal()) throw draft_complete();
        state.emplace(s->state);
        cfg = search_config(*s, options);
        reward = s->model;
        assisted = s->assisted_team;
    }
    const SearchResult r = search(*state, *reward, cfg);

    std::vector<EdgeStats> edges = r.root_edges;
    std::sort(edges.begin(), edges.end(), [](const EdgeStats& a, const EdgeStats& b) {
        if (a.mean_reward != b.mean_reward) return a.mean_reward > b.mean_reward;
        if (a.visits != b.visits) return a.visits > b.visits;
        return a.hero < b.hero;
    });
    // The chosen action leads even when another edge ties its mean.
    auto best = std::find_if(edges.begin(), edges.end(), [&](const EdgeStats& e) { return e.hero == r.best; });
    std::rotate(edges.begin(), best, best + 1);
    const std::size_t k = options.top_k.value_or(config_.default_top_k);
    if (k < 1) throw bad_request("top_k must be positive");
    if (edges.size() > k) edges.resize(k);

    json list = json::array();
    for (const auto& e : edges) {
        list.push_back({{"hero", e.hero}, {"name", hero_name(e.hero)}, {"win_rate", e.mean_reward}, {"visits", e.visits}});
    }
    const Turn t = state->turn();
    return {{"session", id},
            {"step", state->step()},
            {"team", to_string(t.team)},
            {"kind", to_string(t.kind)},
            {"assisted_turn", t.team == assisted},
            {"best", r.best},
            {"recommendations", list},
            {"iterations", r.stats.iterations},
            {"root_visits", r.root_visits},
            {"value", team_reward(t.team, r.root_value_radiant)},
            {"elapsed_ms", r.stats.elapsed_ms},
            {"stopped_by_time_cap", r.stats.stopped_by_time_cap},
            {"search", uct_json(cfg)},
            {"state_hash", std::to_string(state_hash(*state))}};
}

nlohmann::json DraftService::what_if(const std::string& id, HeroId hero, const RecommendOptions& options) const {
    auto s = find(id);
    std::optional<DraftState> state;
    UctConfig cfg;
    std::shared_ptr<const RewardFunction> reward;
    Team assisted;
    {
        std::lock_guard lock(s->mutex);
        if (s->state.is_terminal()) throw draft_complete();
        if (!s->state.is_legal(hero)) throw illegal(s->state, hero);
        state.emplace(s->state);
        cfg = search_config(*s, options);
        reward = s->model;
        assisted = s->assisted_team;
    }
    const Turn t = state->turn();
    const DraftState next = state->apply(hero);
    json out = {{"session", id}, {"hero", hero}, {"name", hero_name(hero)}, {"team", to_string(t.team)},
                {"kind", to_string(t.kind)}, {"step", state->step()}};
    double radiant_w;
    if (next.is_terminal()) {
        radiant_w = reward->evaluate(next);
        out["exact"] = true;
        out["iterations"] = 0;
        out["elapsed_ms"] = 0.0;
    } else {
        const SearchResult r = search(next, *reward, cfg);
        radiant_w = r.root_value_radiant;
        out["exact"] = false;
        out["iterations"] = r.stats.iterations;
        out["elapsed_ms"] = r.stats.elapsed_ms;
        out["search"] = uct_json(cfg);
    }
    out["assisted_team"] = to_string(assisted);
    out["value"] = team_reward(assisted, radiant_w);
    out["value_radiant"] = radiant_w;
    out["state_hash"] = std::to_string(state_hash(*state));
    return out;
}

nlohmann::json DraftService::view(const DraftSession& s) const {
    const auto& turns = s.schedule->turns();
    json history = json::array();
    for (std::size_t i = 0; i < s.history.size(); ++i) {
        history.push_back({{"step", i},
                           {"hero", s.history[i].hero},
                           {"team", to_string(turns[i].team)},
                           {"kind", to_string(turns[i].kind)},
                           {"timestamp_ms", s.history[i].timestamp_ms}});
    }
    json j = {{"id", s.id},
              {"model", s.model_id},
              {"schedule", schedule_to_json(*s.schedule)},
              {"n_heroes", s.state.n_heroes()},
              {"assisted_team", to_string(s.assisted_team)},
              {"uct", uct_json(s.uct)},
              {"step", s.state.step()},
              {"remaining", s.state.remaining()},
              {"terminal", s.state.is_terminal()},
              {"history", history},
              {"picks", {{"radiant", s.state.picks(Team::Radiant)}, {"dire", s.state.picks(Team::Dire)}}},
              {"bans", s.state.bans()},
              {"legal", s.state.legal_actions()},
              {"state_hash", std::to_string(state_hash(s.state))}};
    if (s.state.is_terminal()) {
        const double w = s.model->evaluate(s.state);
        j["turn"] = nullptr;
        j["final"] = {{"radiant_win_rate", w}, {"assisted_win_rate", team_reward(s.assisted_team, w)}};
    } else {
        const Turn t = s.state.turn();
        j["turn"] = {{"step", s.state.step()},
                     {"team", to_string(t.team)},
                     {"kind", to_string(t.kind)},
                     {"assisted", t.team == s.assisted_team}};
    }
    return j;
}

nlohmann::json DraftService::heroes(const std::string& model_id) const {
    const auto reward = model(model_id);
    json list = json::array();
    for (HeroId h = 0; h < reward->n_features(); ++h) list.push_back({{"id", h}, {"name", hero_name(h)}});
    return {{"model", model_id.empty() ? config_.default_model : model_id},
            {"n_heroes", reward->n_features()},
            {"heroes", list}};
}

nlohmann::json DraftService::health() const {
    json models = json::array();
    for (const auto& [id, _] : config_.models) models.push_back(id);
    return {{"status", "ok"}, {"sessions", session_count()}, {"models", models}};
}

std::size_t DraftService::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

void DraftService::append_log(const json& entry) {
    if (!log_.is_open()) return;
    std::lock_guard lock(log_mutex_);
    log_ << entry.dump() << '\n';
    log_.flush();
}

void DraftService::recover() {
    if (!std::filesystem::exists(config_.log_path)) return;
    std::ifstream in(config_.log_path);
    if (!in) throw DataError("cannot read session log " + config_.log_path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) lines.push_back(std::move(line));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = config_.log_path + ":" + std::to_string(i + 1);
        json e;
        try {
            e = json::parse(lines[i]);
        } catch (const json::exception&) {
            if (i + 1 == lines.size()) break;  // torn final write
            throw DataError(where + ": malformed log entry");
        }
        try {
            const std::string op = e.at("op").get<std::string>();
            const std::string id = e.at("id").get<std::string>();
            if (op == "create") {
                auto s = open_session(id, e.at("request"));
                sessions_[id] = std::move(s);
            } else if (op == "action") {
                auto it = sessions_.find(id);
                if (it == sessions_.end()) throw DataError(where + ": action for unknown session " + id);
                DraftSession& s = *it->second;
                const auto hero = e.at("hero").get<HeroId>();
                if (e.at("step").get<std::size_t>() != s.state.step() || !s.state.is_legal(hero)) {
                    throw DataError(where + ": action does not replay");
                }
                s.state.advance(hero);
                s.history.push_back({hero, e.at("ts").get<std::int64_t>()});
            } else {
                throw DataError(where + ": unknown op " + op);
            }
        } catch (const json::exception& ex) {
            throw DataError(where + ": " + ex.what());
        } catch (const ServiceError& ex) {
            throw DataError(where + ": " + ex.what());
        }
    }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const ServiceError& e) {
        send_json(res, e.status(), e.body());
    } catch (const Error& e) {
        send_json(res, 400, ServiceError(400, "bad_request", e.what()).body());
    } catch (const json::exception& e) {
        send_json(res, 400, ServiceError(400, "bad_request", e.what()).body());
    } catch (const std::exception& e) {
        send_json(res, 500, ServiceError(500, "internal", e.what()).body());
    }
}

std::uint64_t parse_uint(const std::string& s, const std::string& name) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw bad_request("invalid " + name + " '" + s + "'");
    return v;
}

RecommendOptions options_from(const httplib::Request& req) {
    RecommendOptions o;
    if (req.has_param("iterations")) o.iterations = parse_uint(req.get_param_value("iterations"), "iterations");
    if (req.has_param("seed")) o.seed = parse_uint(req.get_param_value("seed"), "seed");
    if (req.has_param("top_k")) o.top_k = parse_uint(req.get_param_value("top_k"), "top_k");
    if (req.has_param("c")) {
        const std::string c = req.get_param_value("c");
        try {
            std::size_t used = 0;
            o.exploration_c = std::stod(c, &used);
            if (used != c.size()) throw std::invalid_argument(c);
        } catch (const std::exception&) {
            throw bad_request("invalid c '" + c + "'");
        }
    }
    return o;
}

HeroId hero_from(const json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw bad_request("hero must be a non-negative integer");
    }
    return j.get<HeroId>();
}

}  // namespace

void mount_routes(httplib::Server& server, DraftService& service) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [&](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, service.health()); });
    });
    server.Get("/heroes", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, service.heroes(req.get_param_value("model"))); });
    });
    server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = req.body.empty() ? json::object() : json::parse(req.body);
            send_json(res, 201, service.create_session(body));
        });
    });
    server.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, service.get_session(req.matches[1])); });
    });
    server.Post(R"(/sessions/([^/]+)/actions)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = json::parse(req.body);
            if (!body.is_object() || !body.contains("hero")) throw bad_request("body must be {\"hero\": <id>}");
            send_json(res, 200, service.record_action(req.matches[1], hero_from(body.at("hero"))));
        });
    });
    server.Get(R"(/sessions/([^/]+)/recommendation)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, service.recommend(req.matches[1], options_from(req))); });
    });
    server.Get(R"(/sessions/([^/]+)/what-if)", [&](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (!req.has_param("hero")) throw bad_request("missing hero parameter");
            const auto hero = parse_uint(req.get_param_value("hero"), "hero");
            if (hero > std::numeric_limits<HeroId>::max()) throw bad_request("hero out of range");
            send_json(res, 200,
                      service.what_if(req.matches[1], static_cast<HeroId>(hero), options_from(req)));
        });
    });

    if (!service.config().static_dir.empty() && !server.set_mount_point("/", service.config().static_dir)) {
        throw ConfigError("static directory " + service.config().static_dir + " does not exist");
    }
}

void serve(DraftService& service, const std::string& host, int port) {
    httplib::Server server;
    mount_routes(server, service);
    if (!server.listen(host, port)) {
        throw Error("cannot listen on " + host + ":" + std::to_string(port));
    }
}

}  // namespace herodraft
