#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "featgen/augment.hpp"
#include "featgen/data.hpp"
#include "featgen/feature_store.hpp"
#include "featgen/metrics.hpp"

namespace featgen {

struct UNetConfig {
  std::int64_t in_channels = 4;
  std::int64_t base_filters = 64;
  std::int64_t depth = 4;
  std::int64_t input_side = 240;
  bool batch_norm = false;
  // Initial foreground probability; the head bias starts at logit(output_prior).
  double output_prior = 0.5;

  std::int64_t bottleneck_channels() const { return base_filters << depth; }
  std::int64_t bottleneck_side() const { return input_side >> depth; }
  void validate() const;
};

nlohmann::json to_json(const UNetConfig& c);
UNetConfig unet_config_from_json(const nlohmann::json& j);

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 1e-5;
  int batch_size = 10;
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint_dir;  // empty: no checkpoints

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

/// Activation tap points. encN are encoder block outputs before pooling.
enum class Tap { Enc1, Enc2, Enc3, Enc4, Bottleneck, Dec1, Dec2, Dec3, Dec4 };

Tap parse_tap(std::string_view name);
std::string_view to_string(Tap tap);

/// Two 3x3 same-padded convolutions, each followed by ReLU (optionally preceded by batch norm).
class DoubleConvImpl : public torch::nn::Module {
 public:
  DoubleConvImpl(std::int64_t in, std::int64_t out, bool batch_norm);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::Sequential body_;
};
TORCH_MODULE(DoubleConv);

class UNetImpl : public torch::nn::Module {
 public:
  explicit UNetImpl(const UNetConfig& cfg);

  /// Per-pixel tumor probability [B, 1, side, side].
  torch::Tensor forward(torch::Tensor x);
  torch::Tensor forward_logits(torch::Tensor x);

  /// Runs the network up to `tap` and returns that activation.
  torch::Tensor forward_to(torch::Tensor x, Tap tap);

  /// One full pass that also returns the activations at `taps`, in the order given.
  struct TappedOutput {
    torch::Tensor output;
    std::vector<torch::Tensor> taps;
  };
  TappedOutput forward_taps(torch::Tensor x, const std::vector<Tap>& taps);

  const UNetConfig& config() const { return cfg_; }

 private:
  torch::Tensor run(torch::Tensor x, std::optional<Tap> stop, std::map<Tap, torch::Tensor>* seen = nullptr);

  UNetConfig cfg_;
  std::vector<DoubleConv> encoders_;
  DoubleConv bottleneck_{nullptr};
  std::vector<torch::nn::ConvTranspose2d> upsamplers_;
  std::vector<DoubleConv> decoders_;
  torch::nn::Conv2d head_{nullptr};
};
TORCH_MODULE(UNet);

/// Spatial side and channel count at each encoder level, bottleneck and decoder level.
/// Throws ConfigError if any decoder skip would not match its upsampled input.
struct LevelShape {
  std::string name;
  std::int64_t channels;
  std::int64_t side;
};
std::vector<LevelShape> trace_shapes(const UNetConfig& cfg);

/// Seeds the torch generator with `seed` before constructing, so initial weights are reproducible.
UNet build_unet(const UNetConfig& cfg, std::uint64_t seed = 0);

/// Resizes slices to the network side and replicates the single channel to in_channels.
torch::Tensor make_input_batch(std::span<const SliceSample> slices, const UNetConfig& cfg);
torch::Tensor make_input_batch(std::span<const torch::Tensor> images, const UNetConfig& cfg);
torch::Tensor make_mask_batch(std::span<const torch::Tensor> masks, const UNetConfig& cfg);

struct TrainHistory {
  std::vector<MetricsRecord> train;
  std::vector<MetricsRecord> val;
  int best_epoch = 0;
  double best_val_iou = -1.0;
  std::filesystem::path best_checkpoint;
};

/// Adam + per-sample soft dice loss with on-the-fly augmentation of training batches.
/// Throws StageError("finetune") if the loss becomes non-finite.
TrainHistory train_segmentation(UNet& model, std::span<const SliceSample> train, std::span<const SliceSample> val,
                                const TrainConfig& tc, const AugmentationConfig& ac,
                                const std::filesystem::path& history_csv = {});

/// Per-slice mean of soft dice loss, hard dice and IoU at threshold 0.5.
MetricsRecord evaluate_segmentation(UNet& model, std::span<const SliceSample> slices, int batch_size = 10);

/// Same, but from precomputed probabilities [n, side, side] against masks [n, side, side].
MetricsRecord evaluate_predictions(const torch::Tensor& probs, const torch::Tensor& masks);

std::vector<FeatureMap> extract_features(UNet& model, std::span<const SliceSample> slices, Tap tap = Tap::Bottleneck,
                                         int batch_size = 10);

struct CheckpointInfo {
  UNetConfig config;
  int epoch = 0;
  double val_iou = 0.0;
};

void save_unet_checkpoint(const UNet& model, const std::filesystem::path& path, int epoch, double val_iou);
/// Reads the parameter archive at `path` and its `.json` sidecar.
UNet load_unet_checkpoint(const std::filesystem::path& path, CheckpointInfo* info = nullptr);

}  // namespace featgen
