#pragma once

// Win-rate predictors used as the search reward: majority class, logistic
// regression and a one-hidden-layer ReLU network with sigmoid output.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herodraft/dataset.hpp"
#include "herodraft/reward.hpp"

namespace herodraft {

enum class ModelKind { MajorityClass, LogisticRegression, NeuralNet };

std::string_view to_string(ModelKind kind);
/// Accepts "mc", "lr", "nn" and the long names.
ModelKind parse_model_kind(std::string_view s);

struct TrainConfig {
    std::size_t hidden_units = 64;
    double learning_rate = 0.01;
    std::size_t epochs = 20;
    std::size_t batch_size = 256;
    double l2_penalty = 1e-5;
    double validation_fraction = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct TrainingLog {
    TrainConfig config;
    std::uint64_t dataset_fingerprint = 0;
    std::size_t n_train = 0;
    std::size_t n_validation = 0;
    std::vector<double> train_loss;       // per epoch, after the update pass
    std::vector<double> validation_loss;  // per epoch; empty without a validation split
};

/// Sparse input: (feature index, value) for the nonzero features.
using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

SparseFeatures to_sparse(std::span<const double> dense);

/// Parameter layout in `parameters()`:
///   MajorityClass:      [p]
///   LogisticRegression: [w_0..w_{N-1}, b]
///   NeuralNet:          [W1 (N rows of H), b1 (H), w2 (H), b2]
class RewardModel final : public RewardFunction {
public:
    RewardModel(ModelKind kind, std::size_t n_features, std::size_t hidden_units,
                std::vector<double> parameters);

    /// Seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    static RewardModel initial(ModelKind kind, std::size_t n_features, std::size_t hidden_units,
                               std::uint64_t seed);
    static RewardModel constant(std::size_t n_features, double p);
    static std::size_t parameter_count(ModelKind kind, std::size_t n_features, std::size_t hidden_units);

    ModelKind kind() const { return kind_; }
    std::size_t n_features() const override { return n_features_; }
    std::size_t hidden_units() const { return hidden_units_; }
    const std::vector<double>& parameters() const { return params_; }
    std::vector<double>& mutable_parameters() { return params_; }
    const TrainingLog& training_log() const { return log_; }
    void set_training_log(TrainingLog log) { log_ = std::move(log); }

    /// Radiant win probability; DataError on a length mismatch.
    double predict(std::span<const double> features) const;
    double predict_sparse(const SparseFeatures& x) const;
    double evaluate(const DraftState& terminal) const override;

    /// Pre-sigmoid output.
    double logit_sparse(const SparseFeatures& x) const;

    friend bool operator==(const RewardModel& a, const RewardModel& b) {
        return a.kind_ == b.kind_ && a.n_features_ == b.n_features_ &&
               a.hidden_units_ == b.hidden_units_ && a.params_ == b.params_;
    }

private:
    ModelKind kind_;
    std::size_t n_features_;
    std::size_t hidden_units_;
    std::vector<double> params_;
    TrainingLog log_;
};

inline double predict(const RewardModel& m, std::span<const double> features) { return m.predict(features); }

/// Mean binary cross-entropy over the samples plus (l2/2)*|weights|^2 (biases
/// unpenalised); writes the gradient w.r.t. parameters() into `grad`.
double loss_and_gradient(const RewardModel& model, std::span<const SparseFeatures> x,
                         std::span<const int> y, double l2_penalty, std::vector<double>& grad);

/// Same objective without the gradient.
double loss(const RewardModel& model, std::span<const SparseFeatures> x, std::span<const int> y,
            double l2_penalty);

/// Plain mini-batch gradient descent on binary cross-entropy. The last
/// validation_fraction of a seeded shuffle is held out for per-epoch
/// validation loss. Deterministic given config.seed.
RewardModel train(const MatchDataset& dataset, ModelKind kind, const TrainConfig& config);

struct EvalReport {
    double accuracy = 0.0;
    std::optional<double> auc;  // empty when the data has a single class
    std::size_t n_samples = 0;

    /// Throws DataError if the AUC is undefined.
    double auc_value() const;
};

EvalReport evaluate(const RewardModel& model, const MatchDataset& dataset);

/// Rank-statistic AUC with ties counted one half. DataError if either class
/// is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

void save_model(const RewardModel& model, const std::string& path);
std::string serialize_model(const RewardModel& model);
RewardModel deserialize_model(const std::string& text);
RewardModel load_model(const std::string& path);
/// Also checks n_features against the draft context, ModelFormatError otherwise.
RewardModel load_model(const std::string& path, std::size_t expected_features);

}  // namespace herodraft
