#pragma once

#include <array>
#include <vector>

#include <opencv2/core.hpp>

#include "mor/core/types.hpp"

namespace mor::detector {

inline constexpr std::array<int, 5> kPyramidStrides{8, 16, 32, 64, 128};
inline constexpr int kNumLevels = static_cast<int>(kPyramidStrides.size());

struct AnchorConfig {
  /// Anchor side at P3; doubles per level.
  double base_size{32.0};
  std::vector<double> scales{1.0, 1.2599210498948732, 1.5874010519681994};
  std::vector<double> ratios{0.5, 1.0, 2.0};

  [[nodiscard]] int per_location() const noexcept {
    return static_cast<int>(scales.size() * ratios.size());
  }
  friend bool operator==(const AnchorConfig&, const AnchorConfig&) = default;
};

/// Center-form anchor.
struct Anchor {
  double cx{0.0};
  double cy{0.0};
  double w{0.0};
  double h{0.0};

  [[nodiscard]] BoundingBox box() const noexcept {
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
  }
};

/// Dense anchors for all pyramid levels, ordered level, row, column, anchor-type.
/// This order matches the flattened head outputs.
struct AnchorGrid {
  std::vector<Anchor> anchors;
  std::array<cv::Size, kNumLevels> level_shapes{};
  /// anchors[level_offsets[l] .. level_offsets[l + 1]) belong to level l.
  std::array<std::size_t, kNumLevels + 1> level_offsets{};
  int per_location{0};

  [[nodiscard]] std::size_t size() const noexcept { return anchors.size(); }
};

/// Spatial size of pyramid level `level` (0 = P3) for a given input size.
/// Follows the convolution arithmetic of the backbones: each stride-2 stage maps n -> ceil(n / 2).
[[nodiscard]] cv::Size level_shape(cv::Size input, int level);

/// Analytic anchor count: sum over levels of H_l * W_l * per_location.
[[nodiscard]] std::size_t anchor_count(cv::Size input, const AnchorConfig& config);

[[nodiscard]] AnchorGrid generate_anchors(cv::Size input, const AnchorConfig& config);

}  // namespace mor::detector
