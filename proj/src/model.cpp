#include "herodraft/model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "herodraft/error.hpp"
#include "herodraft/random.hpp"

namespace herodraft {

namespace {

constexpr int kFormatVersion = 1;

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// BCE of a logit z against label y: softplus(z) - y*z.
double bce_from_logit(double z, int y) { return softplus(z) - (y ? z : 0.0); }

struct NetLayout {
    std::size_t n;
    std::size_t h;
    std::size_t w1() const { return 0; }
    std::size_t b1() const { return n * h; }
    std::size_t w2() const { return n * h + h; }
    std::size_t b2() const { return n * h + 2 * h; }
};

std::vector<double>& hidden_scratch(std::size_t h) {
    thread_local std::vector<double> buf;
    buf.resize(h);
    return buf;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::MajorityClass: return "mc";
        case ModelKind::LogisticRegression: return "lr";
        case ModelKind::NeuralNet: return "nn";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "mc" || s == "majority_class") return ModelKind::MajorityClass;
    if (s == "lr" || s == "logistic_regression") return ModelKind::LogisticRegression;
    if (s == "nn" || s == "neural_net") return ModelKind::NeuralNet;
    throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
    if (hidden_units < 1) throw ConfigError("hidden_units must be positive");
    if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
    if (epochs < 1) throw ConfigError("epochs must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be positive");
    if (!(l2_penalty >= 0)) throw ConfigError("l2_penalty must be non-negative");
    if (!(validation_fraction >= 0 && validation_fraction < 1)) {
        throw ConfigError("validation_fraction must lie in [0, 1)");
    }
}

nlohmann::json to_json(const TrainConfig& c) {
    return {{"hidden_units", c.hidden_units},   {"learning_rate", c.learning_rate},
            {"epochs", c.epochs},               {"batch_size", c.batch_size},
            {"l2_penalty", c.l2_penalty},       {"validation_fraction", c.validation_fraction},
            {"seed", c.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.hidden_units = j.value("hidden_units", c.hidden_units);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.l2_penalty = j.value("l2_penalty", c.l2_penalty);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    c.seed = j.value("seed", c.seed);
    return c;
}

SparseFeatures to_sparse(std::span<const double> dense) {
    SparseFeatures out;
    for (std::uint32_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) out.emplace_back(i, dense[i]);
    }
    return out;
}

RewardModel::RewardModel(ModelKind kind, std::size_t n_features, std::size_t hidden_units,
                         std::vector<double> parameters)
    : kind_(kind),
      n_features_(n_features),
      hidden_units_(kind == ModelKind::NeuralNet ? hidden_units : 0),
      params_(std::move(parameters)) {
    if (kind == ModelKind::NeuralNet && hidden_units < 1) {
        throw ModelFormatError("neural net needs at least one hidden unit");
    }
    if (params_.size() != parameter_count(kind_, n_features_, hidden_units_)) {
        throw ModelFormatError("parameter count " + std::to_string(params_.size()) +
                               " does not match model shape");
    }
}

std::size_t RewardModel::parameter_count(ModelKind kind, std::size_t n, std::size_t h) {
    switch (kind) {
        case ModelKind::MajorityClass: return 1;
        case ModelKind::LogisticRegression: return n + 1;
        case ModelKind::NeuralNet: return n * h + 2 * h + 1;
    }
    return 0;
}

RewardModel RewardModel::initial(ModelKind kind, std::size_t n, std::size_t h, std::uint64_t seed) {
    Rng rng(seed);
    auto fill = [&](std::vector<double>& p, std::size_t from, std::size_t count, std::size_t fan_in) {
        const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t i = 0; i < count; ++i) p[from + i] = uniform_real(rng, -r, r);
    };
    switch (kind) {
        case ModelKind::MajorityClass: return constant(n, 0.5);
        case ModelKind::LogisticRegression: {
            std::vector<double> p(n + 1, 0.0);
            fill(p, 0, n, n);
            return RewardModel(kind, n, 0, std::move(p));
        }
        case ModelKind::NeuralNet: {
            const NetLayout L{n, h};
            std::vector<double> p(parameter_count(kind, n, h), 0.0);
            fill(p, L.w1(), n * h, n);
            fill(p, L.w2(), h, h);
            return RewardModel(kind, n, h, std::move(p));
        }
    }
    throw ConfigError("unknown model kind");
}

RewardModel RewardModel::constant(std::size_t n_features, double p) {
    return RewardModel(ModelKind::MajorityClass, n_features, 0, {p});
}

double RewardModel::logit_sparse(const SparseFeatures& x) const {
    switch (kind_) {
        case ModelKind::MajorityClass: {
            const double p = std::clamp(params_[0], 1e-12, 1.0 - 1e-12);
            return std::log(p / (1.0 - p));
        }
        case ModelKind::LogisticRegression: {
            double z = params_[n_features_];
            for (auto [i, v] : x) z += params_[i] * v;
            return z;
        }
        case ModelKind::NeuralNet: {
            const NetLayout L{n_features_, hidden_units_};
            auto& hidden = hidden_scratch(L.h);
            std::copy_n(params_.begin() + static_cast<std::ptrdiff_t>(L.b1()), L.h, hidden.begin());
            for (auto [i, v] : x) {
                const double* row = params_.data() + L.w1() + i * L.h;
                for (std::size_t k = 0; k < L.h; ++k) hidden[k] += v * row[k];
            }
            double z = params_[L.b2()];
            const double* w2 = params_.data() + L.w2();
            for (std::size_t k = 0; k < L.h; ++k) z += w2[k] * std::max(hidden[k], 0.0);
            return z;
        }
    }
    return 0.0;
}

double RewardModel::predict_sparse(const SparseFeatures& x) const {
    for (auto [i, v] : x) {
        if (i >= n_features_) throw DataError("feature index outside model input");
    }
    if (kind_ == ModelKind::MajorityClass) return params_[0];
    return sigmoid(logit_sparse(x));
}

double RewardModel::predict(std::span<const double> features) const {
    if (features.size() != n_features_) {
        throw DataError("model expects " + std::to_string(n_features_) + " features, got " +
                        std::to_string(features.size()));
    }
    if (kind_ == ModelKind::MajorityClass) return params_[0];
    return sigmoid(logit_sparse(to_sparse(features)));
}

double RewardModel::evaluate(const DraftState& terminal) const {
    const auto& slots = terminal.slots();
    if (slots.size() != n_features_) {
        throw DataError("model expects " + std::to_string(n_features_) + " heroes, draft has " +
                        std::to_string(slots.size()));
    }
    if (kind_ == ModelKind::MajorityClass) return params_[0];
    auto value = [](SlotState s) {
        return s == SlotState::PickedRadiant ? 1.0 : s == SlotState::PickedDire ? -1.0 : 0.0;
    };
    if (kind_ == ModelKind::LogisticRegression) {
        double z = params_[n_features_];
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (const double v = value(slots[i]); v != 0.0) z += params_[i] * v;
        }
        return sigmoid(z);
    }
    const NetLayout L{n_features_, hidden_units_};
    auto& hidden = hidden_scratch(L.h);
    std::copy_n(params_.begin() + static_cast<std::ptrdiff_t>(L.b1()), L.h, hidden.begin());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const double v = value(slots[i]);
        if (v == 0.0) continue;
        const double* row = params_.data() + L.w1() + i * L.h;
        for (std::size_t k = 0; k < L.h; ++k) hidden[k] += v * row[k];
    }
    double z = params_[L.b2()];
    const double* w2 = params_.data() + L.w2();
    for (std::size_t k = 0; k < L.h; ++k) z += w2[k] * std::max(hidden[k], 0.0);
    return sigmoid(z);
}

namespace {

double l2_term(const RewardModel& m, double l2, std::vector<double>* grad) {
    if (l2 == 0.0) return 0.0;
    const auto& p = m.parameters();
    std::size_t end = 0;
    if (m.kind() == ModelKind::LogisticRegression) {
        end = m.n_features();
        double s = 0;
        for (std::size_t i = 0; i < end; ++i) {
            s += p[i] * p[i];
            if (grad) (*grad)[i] += l2 * p[i];
        }
        return 0.5 * l2 * s;
    }
    if (m.kind() == ModelKind::NeuralNet) {
        const NetLayout L{m.n_features(), m.hidden_units()};
        double s = 0;
        auto add_range = [&](std::size_t from, std::size_t count) {
            for (std::size_t i = from; i < from + count; ++i) {
                s += p[i] * p[i];
                if (grad) (*grad)[i] += l2 * p[i];
            }
        };
        add_range(L.w1(), L.n * L.h);
        add_range(L.w2(), L.h);
        return 0.5 * l2 * s;
    }
    return 0.0;
}

// Adds the unnormalised per-sample BCE gradient to grad and returns the
// summed BCE.
double accumulate(const RewardModel& m, std::span<const SparseFeatures> x, std::span<const int> y,
                  std::size_t from, std::size_t to, const std::vector<std::size_t>* order,
                  std::vector<double>& grad, std::vector<double>& hidden_pre) {
    const auto& p = m.parameters();
    double total = 0.0;
    const std::size_t n = m.n_features();
    for (std::size_t t = from; t < to; ++t) {
        const std::size_t s = order ? (*order)[t] : t;
        const auto& xs = x[s];
        const int ys = y[s];
        switch (m.kind()) {
            case ModelKind::MajorityClass: {
                const double pr = std::clamp(p[0], 1e-12, 1.0 - 1e-12);
                total += -(ys ? std::log(pr) : std::log(1.0 - pr));
                grad[0] += ys ? -1.0 / pr : 1.0 / (1.0 - pr);
                break;
            }
            case ModelKind::LogisticRegression: {
                double z = p[n];
                for (auto [i, v] : xs) z += p[i] * v;
                total += bce_from_logit(z, ys);
                const double dz = sigmoid(z) - ys;
                for (auto [i, v] : xs) grad[i] += dz * v;
                grad[n] += dz;
                break;
            }
            case ModelKind::NeuralNet: {
                const NetLayout L{n, m.hidden_units()};
                hidden_pre.assign(p.begin() + static_cast<std::ptrdiff_t>(L.b1()),
                                  p.begin() + static_cast<std::ptrdiff_t>(L.b1() + L.h));
                for (auto [i, v] : xs) {
                    const double* row = p.data() + L.w1() + i * L.h;
                    for (std::size_t k = 0; k < L.h; ++k) hidden_pre[k] += v * row[k];
                }
                double z = p[L.b2()];
                for (std::size_t k = 0; k < L.h; ++k) z += p[L.w2() + k] * std::max(hidden_pre[k], 0.0);
                total += bce_from_logit(z, ys);
                const double dz = sigmoid(z) - ys;
                grad[L.b2()] += dz;
                for (std::size_t k = 0; k < L.h; ++k) {
                    const double a = hidden_pre[k];
                    if (a > 0) {
                        grad[L.w2() + k] += dz * a;
                        const double dh = dz * p[L.w2() + k];
                        grad[L.b1() + k] += dh;
                        hidden_pre[k] = dh;
                    } else {
                        hidden_pre[k] = 0.0;
                    }
                }
                for (auto [i, v] : xs) {
                    double* row = grad.data() + L.w1() + i * L.h;
                    for (std::size_t k = 0; k < L.h; ++k) row[k] += v * hidden_pre[k];
                }
                break;
            }
        }
    }
    return total;
}

void check_inputs(const RewardModel& m, std::span<const SparseFeatures> x, std::span<const int> y) {
    if (x.size() != y.size()) throw DataError("feature and label counts differ");
    if (x.empty()) throw DataError("no samples");
    for (const auto& xs : x) {
        for (auto [i, v] : xs) {
            if (i >= m.n_features()) throw DataError("feature index outside model input");
        }
    }
}

}  // namespace

double loss_and_gradient(const RewardModel& model, std::span<const SparseFeatures> x,
                         std::span<const int> y, double l2_penalty, std::vector<double>& grad) {
    check_inputs(model, x, y);
    grad.assign(model.parameters().size(), 0.0);
    std::vector<double> scratch;
    const double sum = accumulate(model, x, y, 0, x.size(), nullptr, grad, scratch);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (double& g : grad) g *= inv;
    return sum * inv + l2_term(model, l2_penalty, &grad);
}

double loss(const RewardModel& model, std::span<const SparseFeatures> x, std::span<const int> y,
            double l2_penalty) {
    check_inputs(model, x, y);
    double sum = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        if (model.kind() == ModelKind::MajorityClass) {
            const double pr = std::clamp(model.parameters()[0], 1e-12, 1.0 - 1e-12);
            sum += -(y[s] ? std::log(pr) : std::log(1.0 - pr));
        } else {
            sum += bce_from_logit(model.logit_sparse(x[s]), y[s]);
        }
    }
    return sum / static_cast<double>(x.size()) + l2_term(model, l2_penalty, nullptr);
}

RewardModel train(const MatchDataset& dataset, ModelKind kind, const TrainConfig& config) {
    config.validate();
    if (dataset.empty()) throw DataError("cannot train on an empty dataset");
    if (dataset.n_heroes == 0) throw DataError("dataset has no hero pool size");

    const std::size_t n = dataset.n_heroes;
    std::vector<SparseFeatures> xs;
    std::vector<int> ys;
    xs.reserve(dataset.size());
    ys.reserve(dataset.size());
    for (const auto& r : dataset.records) {
        validate_record(r, n);
        SparseFeatures f;
        for (HeroId h : r.radiant) f.emplace_back(h, 1.0);
        for (HeroId h : r.dire) f.emplace_back(h, -1.0);
        std::sort(f.begin(), f.end());
        xs.push_back(std::move(f));
        ys.push_back(r.radiant_win ? 1 : 0);
    }

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(config.seed, 1));
    std::shuffle(order.begin(), order.end(), rng);
    auto n_val = static_cast<std::size_t>(config.validation_fraction * static_cast<double>(xs.size()));
    if (n_val >= xs.size()) n_val = 0;
    std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> val_idx(order.end() - static_cast<std::ptrdiff_t>(n_val), order.end());

    TrainingLog log;
    log.config = config;
    log.dataset_fingerprint = dataset_fingerprint(dataset);
    log.n_train = train_idx.size();
    log.n_validation = val_idx.size();

    auto subset = [&](const std::vector<std::size_t>& idx) {
        std::pair<std::vector<SparseFeatures>, std::vector<int>> out;
        for (auto i : idx) {
            out.first.push_back(xs[i]);
            out.second.push_back(ys[i]);
        }
        return out;
    };

    if (kind == ModelKind::MajorityClass) {
        double wins = 0;
        for (auto i : train_idx) wins += ys[i];
        RewardModel m = RewardModel::constant(n, wins / static_cast<double>(train_idx.size()));
        auto [tx, ty] = subset(train_idx);
        log.train_loss.push_back(loss(m, tx, ty, 0.0));
        if (!val_idx.empty()) {
            auto [vx, vy] = subset(val_idx);
            log.validation_loss.push_back(loss(m, vx, vy, 0.0));
        }
        m.set_training_log(std::move(log));
        return m;
    }

    RewardModel model = RewardModel::initial(kind, n, config.hidden_units, derive_seed(config.seed, 2));
    auto [tx, ty] = subset(train_idx);
    std::pair<std::vector<SparseFeatures>, std::vector<int>> val;
    if (!val_idx.empty()) val = subset(val_idx);

    std::vector<std::size_t> batch_order(tx.size());
    std::iota(batch_order.begin(), batch_order.end(), 0);
    std::vector<double> grad(model.parameters().size());
    std::vector<double> scratch;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(batch_order.begin(), batch_order.end(), rng);
        for (std::size_t from = 0; from < tx.size(); from += config.batch_size) {
            const std::size_t to = std::min(tx.size(), from + config.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            accumulate(model, tx, ty, from, to, &batch_order, grad, scratch);
            const double inv = 1.0 / static_cast<double>(to - from);
            for (double& g : grad) g *= inv;
            l2_term(model, config.l2_penalty, &grad);
            auto& p = model.mutable_parameters();
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= config.learning_rate * grad[i];
        }
        log.train_loss.push_back(loss(model, tx, ty, config.l2_penalty));
        if (!val_idx.empty()) log.validation_loss.push_back(loss(model, val.first, val.second, 0.0));
    }
    model.set_training_log(std::move(log));
    return model;
}

double EvalReport::auc_value() const {
    if (!auc) throw DataError("AUC is undefined for single-class data");
    return *auc;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DataError("score and label counts differ");
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

    // Twice the midrank sum of positives keeps everything integral, so the
    // result is exactly (2*#(pos>neg) + #ties) / (2*P*N).
    std::uint64_t pos = 0;
    std::uint64_t twice_rank_sum = 0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
        const std::uint64_t twice_midrank = (i + 1) + j;  // ranks i+1..j
        for (std::size_t k = i; k < j; ++k) {
            if (labels[idx[k]]) {
                ++pos;
                twice_rank_sum += twice_midrank;
            }
        }
        i = j;
    }
    const std::uint64_t neg = scores.size() - pos;
    if (pos == 0 || neg == 0) throw DataError("AUC needs both classes");
    const std::uint64_t numerator = twice_rank_sum - pos * (pos + 1);
    return static_cast<double>(numerator) / static_cast<double>(2 * pos * neg);
}

EvalReport evaluate(const RewardModel& model, const MatchDataset& dataset) {
    if (dataset.empty()) throw DataError("cannot evaluate on an empty dataset");
    if (dataset.n_heroes != model.n_features()) {
        throw DataError("dataset pool size " + std::to_string(dataset.n_heroes) +
                        " does not match model input " + std::to_string(model.n_features()));
    }
    std::vector<double> scores;
    std::vector<int> labels;
    std::size_t correct = 0;
    for (const auto& r : dataset.records) {
        SparseFeatures f;
        for (HeroId h : r.radiant) f.emplace_back(h, 1.0);
        for (HeroId h : r.dire) f.emplace_back(h, -1.0);
        std::sort(f.begin(), f.end());
        const double p = model.predict_sparse(f);
        scores.push_back(p);
        labels.push_back(r.radiant_win);
        correct += (p >= 0.5) == r.radiant_win;
    }
    EvalReport rep;
    rep.n_samples = dataset.size();
    rep.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    if (positives > 0 && positives < static_cast<std::ptrdiff_t>(labels.size())) {
        rep.auc = auc(scores, labels);
    }
    return rep;
}

std::string serialize_model(const RewardModel& model) {
    const auto& log = model.training_log();
    nlohmann::json meta = {{"config", to_json(log.config)},
                           {"dataset_fingerprint", log.dataset_fingerprint},
                           {"n_train", log.n_train},
                           {"n_validation", log.n_validation},
                           {"train_loss", log.train_loss},
                           {"validation_loss", log.validation_loss}};
    std::ostringstream out;
    out << "{\n  \"format_version\": " << kFormatVersion << ",\n  \"kind\": \""
        << to_string(model.kind()) << "\",\n  \"n_features\": " << model.n_features()
        << ",\n  \"hidden_units\": " << model.hidden_units() << ",\n  \"parameters\": [";
    char buf[40];
    const auto& p = model.parameters();
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p[i]);
        out << (i ? "," : "") << (i % 8 == 0 ? "\n    " : " ") << buf;
    }
    out << "\n  ],\n  \"metadata\": " << meta.dump() << "\n}\n";
    return out.str();
}

RewardModel deserialize_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("format_version")) {
            throw ModelFormatError("model file lacks format_version");
        }
        if (j.at("format_version").get<int>() != kFormatVersion) {
            throw ModelFormatError("unsupported model format_version " + j.at("format_version").dump());
        }
        ModelKind kind;
        try {
            kind = parse_model_kind(j.at("kind").get<std::string>());
        } catch (const ConfigError& e) {
            throw ModelFormatError(e.what());
        }
        RewardModel m(kind, j.at("n_features").get<std::size_t>(), j.at("hidden_units").get<std::size_t>(),
                      j.at("parameters").get<std::vector<double>>());
        if (j.contains("metadata")) {
            const auto& meta = j.at("metadata");
            TrainingLog log;
            log.config = train_config_from_json(meta.value("config", nlohmann::json::object()));
            log.dataset_fingerprint = meta.value("dataset_fingerprint", std::uint64_t{0});
            log.n_train = meta.value("n_train", std::size_t{0});
            log.n_validation = meta.value("n_validation", std::size_t{0});
            log.train_loss = meta.value("train_loss", std::vector<double>{});
            log.validation_loss = meta.value("validation_loss", std::vector<double>{});
            m.set_training_log(std::move(log));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const RewardModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ModelFormatError("cannot write model file " + path);
    out << serialize_model(model);
}

RewardModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFormatError("cannot open model file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

RewardModel load_model(const std::string& path, std::size_t expected_features) {
    RewardModel m = load_model(path);
    if (m.n_features() != expected_features) {
        throw ModelFormatError("model has " + std::to_string(m.n_features()) +
                               " inputs but the draft has " + std::to_string(expected_features) +
                               " heroes");
    }
    return m;
}

}  // namespace herodraft
