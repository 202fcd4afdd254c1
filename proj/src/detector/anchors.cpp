#include "mor/detector/anchors.hpp"

#include <cmath>

#include "mor/error.hpp"

namespace mor::detector {
namespace {

int halve(int n) { return (n + 1) / 2; }

}  // namespace

cv::Size level_shape(cv::Size input, int level) {
  if (level < 0 || level >= kNumLevels) throw Error("pyramid level out of range");
  if (input.width <= 0 || input.height <= 0) throw ShapeError("input size must be positive");
  cv::Size s = input;
  for (int i = 0; i < level + 3; ++i) s = {halve(s.width), halve(s.height)};
  return s;
}

std::size_t anchor_count(cv::Size input, const AnchorConfig& config) {
  std::size_t n = 0;
  for (int l = 0; l < kNumLevels; ++l) {
    n += static_cast<std::size_t>(level_shape(input, l).area());
  }
  return n * static_cast<std::size_t>(config.per_location());
}

AnchorGrid generate_anchors(cv::Size input, const AnchorConfig& config) {
  if (config.base_size <= 0.0 || config.scales.empty() || config.ratios.empty()) {
    throw ConfigError("anchor config needs a positive base size, scales and ratios");
  }
  AnchorGrid grid;
  grid.per_location = config.per_location();
  grid.anchors.reserve(anchor_count(input, config));

  // Anchor templates per level, ratio = h / w at constant area.
  for (int l = 0; l < kNumLevels; ++l) {
    const double stride = kPyramidStrides[static_cast<std::size_t>(l)];
    const double size = config.base_size * std::pow(2.0, l);
    std::vector<std::pair<double, double>> templates;
    for (double r : config.ratios) {
      for (double s : config.scales) {
        if (r <= 0.0 || s <= 0.0) throw ConfigError("anchor scales and ratios must be positive");
        const double area = (size * s) * (size * s);
        const double w = std::sqrt(area / r);
        templates.emplace_back(w, w * r);
      }
    }
    const cv::Size shape = level_shape(input, l);
    grid.level_shapes[static_cast<std::size_t>(l)] = shape;
    grid.level_offsets[static_cast<std::size_t>(l)] = grid.anchors.size();
    for (int y = 0; y < shape.height; ++y) {
      for (int x = 0; x < shape.width; ++x) {
        const double cx = (x + 0.5) * stride;
        const double cy = (y + 0.5) * stride;
        for (const auto& [w, h] : templates) grid.anchors.push_back({cx, cy, w, h});
      }
    }
  }
  grid.level_offsets[kNumLevels] = grid.anchors.size();
  return grid;
}

}  // namespace mor::detector
