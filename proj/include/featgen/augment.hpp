#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include <nlohmann/json.hpp>
#include <torch/types.h>

namespace featgen {

/// Stochastic augmentation recipe. Defaults are the tuned training recipe.
struct AugmentationConfig {
  double p_hflip = 0.5;
  double p_vflip = 0.5;
  double elastic_alpha = 720.0;  // displacement magnitude, pixels
  double elastic_sigma = 24.0;   // smoothing kernel width, pixels
  double max_rotation = 20.0;    // degrees, symmetric
  double max_shift = 0.10;       // fraction of side length, per axis
  double max_shear = 0.05;       // horizontal shear factor
  double zoom_range = 0.10;      // scale drawn from [1 - r, 1 + r]

  /// Every parameter zero: draws are always the identity.
  static AugmentationConfig identity();
  void validate() const;
};

nlohmann::json to_json(const AugmentationConfig& c);
AugmentationConfig augmentation_from_json(const nlohmann::json& j);

/// A fully determined realization of the recipe.
struct AugmentationDraw {
  bool hflip = false;
  bool vflip = false;
  double rotation_deg = 0.0;
  double shift_x = 0.0;  // fraction of width
  double shift_y = 0.0;  // fraction of height
  double shear = 0.0;
  double zoom = 1.0;
  double elastic_alpha = 0.0;
  double elastic_sigma = 1.0;
  std::uint64_t elastic_seed = 0;

  bool has_resampling() const;
  bool is_identity() const { return !hflip && !vflip && !has_resampling(); }
  bool operator==(const AugmentationDraw&) const = default;
};

AugmentationDraw draw(const AugmentationConfig& config, std::uint64_t seed);

/// Applies one draw to an image/mask pair of shape [h, w]; order is
/// flips, rotation, shear, zoom, shift, elastic. Images are sampled bilinearly,
/// masks by nearest neighbor; pixels mapped from outside the frame become 0.
std::pair<torch::Tensor, torch::Tensor> apply(const torch::Tensor& image, const torch::Tensor& mask,
                                              const AugmentationDraw& d);

/// Undoes the geometric (non-elastic) part of a draw. Used for alignment checks.
std::pair<torch::Tensor, torch::Tensor> apply_inverse_geometric(const torch::Tensor& image,
                                                                const torch::Tensor& mask,
                                                                const AugmentationDraw& d);

/// Smoothed random displacement: alpha * gauss_sigma(U[-1, 1]) per axis.
/// Returns a float32 tensor [2, h, w]; channel 0 is the x (column) displacement.
torch::Tensor elastic_field(std::int64_t height, std::int64_t width, double alpha, double sigma,
                            std::uint64_t seed);

/// Row-major 2x3 affine mapping output pixel coordinates to source coordinates
/// for the rotation/shear/zoom/shift part of a draw (flips excluded).
std::array<double, 6> inverse_affine(const AugmentationDraw& d, std::int64_t height, std::int64_t width);

}  // namespace featgen
