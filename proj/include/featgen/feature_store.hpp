#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <torch/types.h>

#include "featgen/common.hpp"

namespace featgen {

/// A labeled activation tensor [c, h, w] (float32, contiguous).
struct FeatureMap {
  torch::Tensor data;
  ClassLabel label = ClassLabel::HGG;
  Source source = Source::REAL;
  std::string parent_id;
};

/// Container layout, little-endian throughout:
///
///   "FGEN" | version u32 | record_count u64 | c u32 | h u32 | w u32
///   per record: label u8 | source u8 | id_len u16 | id bytes | c*h*w float32
struct StoreHeader {
  static constexpr std::array<char, 4> kMagic{'F', 'G', 'E', 'N'};
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::size_t kSize = 4 + 4 + 8 + 3 * 4;

  std::uint32_t version = kVersion;
  std::uint64_t record_count = 0;
  std::array<std::uint32_t, 3> dims{0, 0, 0};
};

class StoreError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, VersionMismatch, TruncatedPayload, HeterogeneousShapes, InvalidRecord, Io };

  StoreError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Writes `records` to `path`, replacing any existing file. An empty span produces a
/// header-only file; its dims come from `empty_dims`.
std::uint64_t write_store(const std::filesystem::path& path, std::span<const FeatureMap> records,
                          std::array<std::uint32_t, 3> empty_dims = {0, 0, 0});

std::vector<FeatureMap> read_store(const std::filesystem::path& path);

StoreHeader read_store_header(const std::filesystem::path& path);

/// Size in bytes of one serialized record.
std::uint64_t record_size(const StoreHeader& header, std::size_t id_length);

struct StoreSummary {
  StoreHeader header;
  std::array<std::uint64_t, kNumClasses> per_class{0, 0};
  std::array<std::uint64_t, 2> per_source{0, 0};
};

StoreSummary inspect_store(const std::filesystem::path& path);

/// Stacks records into a [n, c, h, w] tensor plus a [n] int64 label tensor.
std::pair<torch::Tensor, torch::Tensor> stack_features(std::span<const FeatureMap> records);

}  // namespace featgen
