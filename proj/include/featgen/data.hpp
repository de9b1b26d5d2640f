#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/types.h>

#include "featgen/common.hpp"

namespace featgen {

inline constexpr std::int64_t kSliceSide = 240;

/// A multi-channel scan. voxels and masks are float32 [channels, side, side];
/// masks hold only 0 and 1.
struct VolumeSample {
  std::string id;
  torch::Tensor voxels;
  torch::Tensor masks;
  ClassLabel label = ClassLabel::HGG;

  std::int64_t channels() const { return voxels.size(0); }
};

/// One channel of a volume: image and mask are float32 [side, side].
struct SliceSample {
  torch::Tensor image;
  torch::Tensor mask;
  ClassLabel label = ClassLabel::HGG;
  std::string parent_id;  // volume id
  std::int64_t channel = 0;

  std::string slice_id() const { return parent_id + "#" + std::to_string(channel); }
};

struct NormStats {
  double mean = 0.0;
  double std = 1.0;
};

struct SplitSpec {
  double train_fraction = 0.9;
  std::uint64_t seed = 0;
};

/// Throws ConfigError if the volume breaks a shape or binarity invariant.
void validate_volume(const VolumeSample& volume);

/// Procedural stand-in for a clinical scan. HGG: large irregular bright region;
/// LGG: small smooth region with a soft intensity edge. Deterministic in its inputs.
VolumeSample generate_phantom(ClassLabel label, std::int64_t channels, std::uint64_t seed,
                              std::string id = {}, std::int64_t side = kSliceSide);

std::vector<SliceSample> extract_slices(const VolumeSample& volume);

/// Per-class index split: shuffle each class, take floor(train_fraction * n) for train.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split_indices(
    std::span<const ClassLabel> labels, const SplitSpec& spec);

std::pair<std::vector<VolumeSample>, std::vector<VolumeSample>> stratified_split(
    std::span<const VolumeSample> volumes, const SplitSpec& spec);

/// Population mean/std over every pixel of every training image.
NormStats fit_normalizer(std::span<const SliceSample> train);

void apply_normalizer(std::span<SliceSample> slices, const NormStats& stats);
torch::Tensor normalize(const torch::Tensor& image, const NormStats& stats);
torch::Tensor denormalize(const torch::Tensor& image, const NormStats& stats);

// ---- on-disk dataset ----

struct ManifestEntry {
  std::string id;
  ClassLabel label = ClassLabel::HGG;
  std::string path;  // relative to the manifest's directory
  std::int64_t channels = 0;
};

struct DatasetManifest {
  std::vector<ManifestEntry> volumes;
  NormStats norm;
  SplitSpec split;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// A volume file is a two-record feature store: record 0 holds voxels, record 1 the masks.
void write_volume(const std::filesystem::path& path, const VolumeSample& volume);
VolumeSample read_volume(const std::filesystem::path& path);

/// Reads the listed volumes, extracts slices and normalizes them with the manifest stats.
std::vector<SliceSample> load_slices(const std::filesystem::path& manifest_path,
                                     const DatasetManifest& manifest, std::span<const std::string> ids);

}  // namespace featgen
