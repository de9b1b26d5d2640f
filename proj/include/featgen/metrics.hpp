#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <torch/types.h>

#include "featgen/common.hpp"

namespace featgen {

inline constexpr double kDiceEpsilon = 1e-5;

/// Pixel tallies. Soft variants carry fractional counts.
struct ConfusionCounts {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;

  double total() const { return tp + fp + fn + tn; }
};

struct MetricsRecord {
  int epoch = 0;
  std::string split;
  double soft_dice_loss = 0.0;
  double hard_dice = 0.0;
  double iou = 0.0;
};

/// Counts for two binary masks of equal shape. Throws ConfigError on non-binary input.
ConfusionCounts confusion_counts(const torch::Tensor& pred_mask, const torch::Tensor& target);

/// 1 - (2 sum(p t) + eps) / (sum p + sum t + eps), pooled over all elements.
/// Differentiable in `pred`.
torch::Tensor soft_dice_loss(const torch::Tensor& pred, const torch::Tensor& target, double eps = kDiceEpsilon);

/// Soft dice loss computed per leading-dimension sample, then averaged.
torch::Tensor batch_soft_dice_loss(const torch::Tensor& pred, const torch::Tensor& target,
                                   double eps = kDiceEpsilon);

/// 2TP / (2TP + FP + FN); 1 when both masks are empty.
double hard_dice(const torch::Tensor& pred_mask, const torch::Tensor& target);
double hard_dice(const ConfusionCounts& counts);

/// TP / (TP + FP + FN); 1 when both masks are empty.
double iou(const torch::Tensor& pred_mask, const torch::Tensor& target);
double iou(const ConfusionCounts& counts);

torch::Tensor binarize(const torch::Tensor& prob, double threshold = 0.5);

struct ClassAccuracy {
  std::array<std::optional<double>, kNumClasses> per_class;  // nullopt when the class is absent
  std::array<std::size_t, kNumClasses> counts{0, 0};
  std::array<std::size_t, kNumClasses> correct{0, 0};
  double total = 0.0;
};

ClassAccuracy per_class_accuracy(std::span<const ClassLabel> preds, std::span<const ClassLabel> labels);

/// Appends MetricsRecord rows; writes the header when the file is new or empty.
void append_metrics_csv(const std::filesystem::path& path, const MetricsRecord& record);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

}  // namespace featgen
