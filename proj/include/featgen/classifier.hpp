#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "featgen/feature_store.hpp"
#include "featgen/metrics.hpp"

namespace featgen {

struct ClassifierConfig {
  std::int64_t conv1_filters = 256;
  std::int64_t conv2_filters = 128;
  std::int64_t kernel_size = 3;
  std::int64_t fc1_width = 256;
  double dropout_p = 0.5;
  int epochs = 20;
  double learning_rate = 1e-3;
  int batch_size = 32;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const ClassifierConfig& c);
ClassifierConfig classifier_config_from_json(const nlohmann::json& j);

struct MixSpec {
  std::optional<std::array<std::size_t, kNumClasses>> real_count;  // nullopt: every real record
  std::size_t synthetic_count = 0;
};

nlohmann::json to_json(const MixSpec& m);

/// Two conv -> batch-norm -> ReLU -> max-pool blocks, then dropout, FC, ReLU, dropout, FC.
/// Output is P(HGG).
class FeatureClassifierImpl : public torch::nn::Module {
 public:
  FeatureClassifierImpl(const ClassifierConfig& cfg, std::array<std::int64_t, 3> dims);

  torch::Tensor forward_logits(const torch::Tensor& x);
  torch::Tensor forward(const torch::Tensor& x) { return torch::sigmoid(forward_logits(x)); }

  const ClassifierConfig& config() const { return cfg_; }

 private:
  ClassifierConfig cfg_;
  torch::nn::Sequential features_;
  torch::nn::Sequential head_;
};
TORCH_MODULE(FeatureClassifier);

FeatureClassifier build_classifier(const ClassifierConfig& cfg, std::array<std::int64_t, 3> dims);

struct ClassifierEpoch {
  int epoch = 0;
  double loss = 0.0;
  double train_accuracy = 0.0;
};

/// The training set built from a mix: the selected real records followed by the first
/// `synthetic_count` synthetic records, before shuffling.
std::vector<FeatureMap> assemble_training_set(std::span<const FeatureMap> real, std::span<const FeatureMap> synthetic,
                                              const MixSpec& mix);

/// Adam + binary cross-entropy on the assembled mix, reshuffled every epoch.
std::vector<ClassifierEpoch> train_classifier(FeatureClassifier& model, std::span<const FeatureMap> real,
                                              std::span<const FeatureMap> synthetic, const MixSpec& mix,
                                              const ClassifierConfig& cfg);

using LabelPredictor = std::function<std::vector<ClassLabel>(const torch::Tensor& batch)>;

/// Per-class accuracy of any predictor over `records` (no source check).
ClassAccuracy accuracy_with(std::span<const FeatureMap> records, const LabelPredictor& predict, int batch_size = 64);

std::vector<ClassLabel> predict_labels(FeatureClassifier& model, const torch::Tensor& batch);

/// Test-set evaluation at threshold 0.5. Throws ConfigError if any record is synthetic.
ClassAccuracy evaluate_classifier(FeatureClassifier& model, std::span<const FeatureMap> test);
ClassAccuracy evaluate_test_set(std::span<const FeatureMap> test, const LabelPredictor& predict);

nlohmann::json to_json(const ClassAccuracy& acc);

void write_classifier_curves_csv(const std::filesystem::path& path, std::span<const ClassifierEpoch> curves);

}  // namespace featgen
