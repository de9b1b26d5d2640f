#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace featgen {

/// Tumor grade. Numeric values are the on-disk encoding.
enum class ClassLabel : std::uint8_t { HGG = 0, LGG = 1 };

inline constexpr int kNumClasses = 2;

/// Provenance of a feature map. Numeric values are the on-disk encoding.
enum class Source : std::uint8_t { REAL = 0, SYNTHETIC = 1 };

std::string_view to_string(ClassLabel label);
std::string_view to_string(Source source);
ClassLabel parse_label(std::string_view text);
std::optional<ClassLabel> label_from_index(int index);

inline int label_index(ClassLabel label) { return static_cast<int>(label); }

/// Invalid configuration or input contract violation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A training or processing stage could not complete.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

/// FNV-1a over a byte string. Stable across platforms, used for content addressing.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Puts libtorch into single-threaded, deterministic-kernel mode.
void enable_strict_determinism();

}  // namespace featgen
