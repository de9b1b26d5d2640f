#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "featgen/acgan.hpp"
#include "featgen/augment.hpp"
#include "featgen/classifier.hpp"
#include "featgen/data.hpp"
#include "featgen/unet.hpp"

namespace featgen {

struct PhantomSpec {
  std::size_t hgg = 61;
  std::size_t lgg = 40;
  std::int64_t channels = 8;
  std::int64_t side = kSliceSide;
};

struct GenerateConfig {
  std::size_t n = 4800;
  double lgg_fraction = 0.5;
  std::uint64_t seed = 0;

  std::array<std::size_t, kNumClasses> class_mix() const;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "runs/default";
  // Either phantom generation or ingest of an existing manifest.
  PhantomSpec phantom;
  std::filesystem::path ingest_manifest;
  SplitSpec split;
  AugmentationConfig augmentation;
  UNetConfig unet;
  TrainConfig train;
  Tap tap = Tap::Bottleneck;
  GanConfig gan;
  GenerateConfig generate;
  ClassifierConfig classifier;
  std::vector<std::size_t> sweep{0, 200, 400, 600, 800, 1000, 1158, 1200};

  void validate() const;
};

/// Section seeds that are not given explicitly are derived from the top-level seed.
/// Relative paths in the file are resolved against `base_dir`.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig load_pipeline_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

enum class Stage { Prepare, Finetune, Extract, GanTrain, Generate, Filter, Sweep, Report };
inline constexpr std::array<Stage, 8> kAllStages{Stage::Prepare,  Stage::Finetune, Stage::Extract, Stage::GanTrain,
                                                 Stage::Generate, Stage::Filter,   Stage::Sweep,   Stage::Report};

std::string_view to_string(Stage stage);
/// Directory of a stage's artifacts, relative to output_dir.
std::filesystem::path stage_dir(Stage stage);

/// Content hashes of every stage: a stage's hash covers its own config section and its upstream hashes.
std::map<Stage, std::uint64_t> stage_hashes(const PipelineConfig& cfg);

/// Thrown when a stage needs an artifact that is not on disk.
class MissingArtifactError : public StageError {
 public:
  MissingArtifactError(std::string stage, std::filesystem::path path);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct SweepRow {
  std::size_t synthetic_count = 0;
  ClassAccuracy accuracy;
};

nlohmann::json to_json(const SweepRow& row);

struct RunReport {
  std::uint64_t seed = 0;
  std::map<std::string, std::string> stage_hashes;
  std::map<std::string, std::vector<std::string>> artifacts;  // relative to output_dir

  int unet_best_epoch = 0;
  double unet_best_val_iou = 0.0;
  std::vector<MetricsRecord> unet_final;  // last train and val rows

  std::optional<GanEpochCurve> gan_final;
  std::size_t generated = 0;
  std::size_t kept = 0;

  std::array<std::size_t, kNumClasses> train_counts{0, 0};
  std::array<std::size_t, kNumClasses> test_counts{0, 0};
  ClassLabel minority = ClassLabel::LGG;
  double majority_constant_total = 0.0;

  std::vector<SweepRow> rows;
  std::size_t best_row = 0;
  std::optional<std::size_t> best_nonzero_row;
  std::vector<std::string> plots;
};

nlohmann::json to_json(const RunReport& r);

/// Row maximizing minority-class accuracy among rows whose total is at least `floor_total`,
/// ties broken by higher total then fewer synthetic features. If no row clears the floor,
/// the same ordering is applied to all rows. Rows with synthetic_count 0 are skipped when
/// `nonzero_only`. Returns nullopt if nothing is eligible.
std::optional<std::size_t> select_best_row(const std::vector<SweepRow>& rows, ClassLabel minority, double floor_total,
                                           bool nonzero_only);

/// Trains one classifier on the real features plus the first `synthetic_count` synthetic
/// features and evaluates it on `test`. With a nonempty `curves_csv`, writes the training curves.
SweepRow classify_mix(std::span<const FeatureMap> real, std::span<const FeatureMap> synthetic,
                      std::span<const FeatureMap> test, std::size_t synthetic_count, const ClassifierConfig& cfg,
                      const std::filesystem::path& curves_csv = {});

void append_sweep_csv(const std::filesystem::path& path, const SweepRow& row);

/// Writes the U-Net curves, GAN curves and accuracy-vs-synthetic_count bar chart as SVG files
/// into `plot_dir`, reading the curves CSVs under `output_dir`. Returns the files written.
std::vector<std::filesystem::path> render_report(const RunReport& report, const std::filesystem::path& output_dir,
                                                 const std::filesystem::path& plot_dir);

struct StageOutcome {
  Stage stage;
  std::uint64_t hash = 0;
  bool executed = false;
};

struct PipelineResult {
  std::vector<StageOutcome> stages;
  std::optional<RunReport> report;
};

/// Runs every stage up to and including `until`, skipping stages whose marker matches their
/// hash and whose artifacts exist. A failing stage throws StageError naming it and leaves
/// earlier artifacts in place.
PipelineResult run_pipeline(const PipelineConfig& cfg, Stage until = Stage::Report, std::ostream* log = nullptr);

}  // namespace featgen
