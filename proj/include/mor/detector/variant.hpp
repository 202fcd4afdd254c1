#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mor/detector/anchors.hpp"

namespace mor::detector {

enum class BackboneFamily { ResNet50, MobileNetV2 };

[[nodiscard]] std::string_view backbone_name(BackboneFamily f) noexcept;

struct BackboneSpec {
  BackboneFamily family{BackboneFamily::ResNet50};
  bool pretrained{false};
  /// ImageNet weights in the library's backbone archive format; required when pretrained.
  std::filesystem::path weights;
};

enum class Version { V1, V2, V3, V4 };

/// One member of the model family: v1/v2 ResNet-50, v3/v4 MobileNetV2;
/// v1/v3 add a parallel appearance stream fused at matching scales.
struct ModelVariant {
  Version version{Version::V1};
  BackboneSpec backbone;
  bool dual_stream{true};
  std::vector<int> lags{1, 3};
  /// Flow channels per lag: 1 (magnitude) or 2 (u, v).
  int channels_per_lag{1};

  [[nodiscard]] int flow_channels() const noexcept {
    return static_cast<int>(lags.size()) * channels_per_lag;
  }
  /// Channels of the motion stream input: flow channels plus the current frame.
  [[nodiscard]] int motion_input_channels() const noexcept { return flow_channels() + 3; }
  [[nodiscard]] std::string tag() const;
};

[[nodiscard]] Version version_from_string(std::string_view s);
[[nodiscard]] std::string_view version_name(Version v) noexcept;

/// Canonical variant for a version: backbone family and stream layout are implied by it.
[[nodiscard]] ModelVariant make_variant(Version version, std::vector<int> lags);

/// Throws ConfigError when the backbone/stream layout disagrees with the version.
void validate_variant(const ModelVariant& variant);

struct HeadConfig {
  int num_classes{kNumClasses};
  int pyramid_channels{256};
  int head_convs{4};
  int head_channels{256};
  double prior_probability{0.01};
  friend bool operator==(const HeadConfig&, const HeadConfig&) = default;
};

}  // namespace mor::detector
