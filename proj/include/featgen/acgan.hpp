#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "featgen/feature_store.hpp"

namespace featgen {

struct GanConfig {
  std::int64_t nz = 100;
  std::int64_t ngf = 64;
  std::int64_t ndf = 64;
  std::int64_t num_classes = kNumClasses;
  double learning_rate = 0.002;
  int batch_size = 16;
  int epochs = 50;
  double leaky_slope = 0.2;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const GanConfig& c);
GanConfig gan_config_from_json(const nlohmann::json& j);

using FeatureDims = std::array<std::int64_t, 3>;

/// Per-channel affine map between raw features and the space the GAN trains in.
class FeatureScalerImpl : public torch::nn::Module {
 public:
  explicit FeatureScalerImpl(std::int64_t channels);
  void fit(const torch::Tensor& features);  // [n, c, h, w]
  torch::Tensor standardize(const torch::Tensor& x) const;
  torch::Tensor destandardize(const torch::Tensor& x) const;

  torch::Tensor mean;
  torch::Tensor std;
};
TORCH_MODULE(FeatureScaler);

/// (z, one-hot class) -> feature map, through three transposed-convolution layers
/// with leaky ReLU and a linear 1x1 output projection.
class GeneratorImpl : public torch::nn::Module {
 public:
  GeneratorImpl(const GanConfig& cfg, FeatureDims dims);

  /// Output in standardized feature space, [B, c, h, w].
  torch::Tensor forward(const torch::Tensor& z, const torch::Tensor& labels);

  const GanConfig& config() const { return cfg_; }
  const FeatureDims& dims() const { return dims_; }
  FeatureScaler scaler{nullptr};

 private:
  GanConfig cfg_;
  FeatureDims dims_;
  torch::nn::Sequential body_;
};
TORCH_MODULE(Generator);

struct DiscriminatorOutput {
  torch::Tensor source_logit;  // [B]
  torch::Tensor source_prob;   // [B], P(S = real)
  torch::Tensor class_logp;    // [B, num_classes], log-probabilities
};

/// Feature map -> (source probability, class log-probabilities); three convolution layers
/// with leaky ReLU feeding two linear heads.
class DiscriminatorImpl : public torch::nn::Module {
 public:
  DiscriminatorImpl(const GanConfig& cfg, FeatureDims dims);

  /// Input in standardized feature space.
  DiscriminatorOutput forward(const torch::Tensor& x);

  /// argmax class for raw (unstandardized) features.
  torch::Tensor predict_class(const torch::Tensor& raw);

  const GanConfig& config() const { return cfg_; }
  const FeatureDims& dims() const { return dims_; }
  FeatureScaler scaler{nullptr};

 private:
  GanConfig cfg_;
  FeatureDims dims_;
  torch::nn::Sequential body_;
  torch::nn::Linear source_head_{nullptr};
  torch::nn::Linear class_head_{nullptr};
};
TORCH_MODULE(Discriminator);

Generator build_generator(const GanConfig& cfg, FeatureDims dims);
Discriminator build_discriminator(const GanConfig& cfg, FeatureDims dims);

/// Mean over the batch of -log P(real | real) - log P(fake | fake).
torch::Tensor source_loss(const torch::Tensor& p_real_on_real, const torch::Tensor& p_real_on_fake);
/// Mean negative log-likelihood of `targets` under class log-probabilities.
torch::Tensor class_loss(const torch::Tensor& class_logp, const torch::Tensor& targets);

struct DiscriminatorLoss {
  torch::Tensor source;  // BCE: real -> real, fake -> fake
  torch::Tensor cls;     // NLL on real labels plus NLL on the fakes' conditioning labels
  DiscriminatorOutput on_real;
  DiscriminatorOutput on_fake;
};

struct GeneratorLoss {
  torch::Tensor source;  // BCE: fake -> real
  torch::Tensor cls;     // NLL of the conditioning labels
  DiscriminatorOutput on_fake;
};

/// Both inputs standardized. Pass `fake` detached to keep gradients out of the generator.
DiscriminatorLoss discriminator_loss(Discriminator& d, const torch::Tensor& real, const torch::Tensor& labels,
                                     const torch::Tensor& fake, const torch::Tensor& fake_labels);
GeneratorLoss generator_loss(Discriminator& d, const torch::Tensor& fake, const torch::Tensor& fake_labels);

struct GanStepReport {
  double d_loss_source = 0.0;
  double d_loss_class = 0.0;
  double g_loss_source = 0.0;
  double g_loss_class = 0.0;
  double d_class_accuracy = 0.0;       // on the real batch
  double d_class_accuracy_fake = 0.0;  // on the fake batch, against conditioning labels
};

/// Holds both networks and their Adam optimizers.
class AcGanTrainer {
 public:
  AcGanTrainer(Generator generator, Discriminator discriminator, const GanConfig& cfg);

  /// One discriminator update followed by one generator update. `real` is standardized.
  /// Throws StageError("gan-train") on a non-finite loss.
  GanStepReport step(const torch::Tensor& real, const torch::Tensor& labels);

  Generator generator;
  Discriminator discriminator;

 private:
  GanConfig cfg_;
  torch::optim::Adam opt_g_;
  torch::optim::Adam opt_d_;
};

struct GanEpochCurve {
  int epoch = 0;
  GanStepReport mean;
};

struct AcGanResult {
  Generator generator{nullptr};
  Discriminator discriminator{nullptr};
  std::vector<GanEpochCurve> curves;
};

/// Trains on real records (both classes required). With a nonempty `out_dir`, writes
/// generator.pt / discriminator.pt (+ .json sidecars) after every epoch and curves.csv.
AcGanResult train_acgan(std::span<const FeatureMap> real, const GanConfig& cfg,
                        const std::filesystem::path& out_dir = {});

void write_gan_curves_csv(const std::filesystem::path& path, std::span<const GanEpochCurve> curves);
std::vector<GanEpochCurve> read_gan_curves_csv(const std::filesystem::path& path);

/// Interleaves labels so that every prefix of the output is close to the requested mix.
std::vector<ClassLabel> interleave_labels(std::array<std::size_t, kNumClasses> class_mix);

/// Synthesizes sum(class_mix) raw-space features; deterministic per seed.
std::vector<FeatureMap> generate_features(Generator& generator, std::array<std::size_t, kNumClasses> class_mix,
                                          std::uint64_t seed, int batch_size = 64);

using ClassPredictor = std::function<std::vector<int>(const torch::Tensor& batch)>;

/// Keeps the records whose predicted class equals their label, preserving order.
std::vector<FeatureMap> filter_by_class_agreement(std::span<const FeatureMap> records, const ClassPredictor& predict,
                                                  int batch_size = 64);
std::vector<FeatureMap> filter_by_discriminator(Discriminator& discriminator, std::span<const FeatureMap> synthetic,
                                                int batch_size = 64);

void save_generator(const Generator& g, const std::filesystem::path& path, int epoch);
void save_discriminator(const Discriminator& d, const std::filesystem::path& path, int epoch);
Generator load_generator(const std::filesystem::path& path);
Discriminator load_discriminator(const std::filesystem::path& path);

}  // namespace featgen
