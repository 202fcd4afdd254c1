#include "mor/detector/variant.hpp"

#include "mor/error.hpp"

namespace mor::detector {

std::string_view backbone_name(BackboneFamily f) noexcept {
  return f == BackboneFamily::ResNet50 ? "resnet50" : "mobilenetv2";
}

Version version_from_string(std::string_view s) {
  if (s == "v1") return Version::V1;
  if (s == "v2") return Version::V2;
  if (s == "v3") return Version::V3;
  if (s == "v4") return Version::V4;
  throw ConfigError("unknown model variant '" + std::string(s) + "' (expected v1..v4)");
}

std::string_view version_name(Version v) noexcept {
  switch (v) {
    case Version::V1:
      return "v1";
    case Version::V2:
      return "v2";
    case Version::V3:
      return "v3";
    case Version::V4:
      return "v4";
  }
  return "?";
}

std::string ModelVariant::tag() const {
  std::string s(version_name(version));
  s += "-";
  for (std::size_t i = 0; i < lags.size(); ++i) s += (i ? "-" : "") + std::to_string(lags[i]);
  return s;
}

ModelVariant make_variant(Version version, std::vector<int> lags) {
  ModelVariant v;
  v.version = version;
  v.lags = std::move(lags);
  v.backbone.family = (version == Version::V1 || version == Version::V2) ? BackboneFamily::ResNet50
                                                                         : BackboneFamily::MobileNetV2;
  v.dual_stream = version == Version::V1 || version == Version::V3;
  return v;
}

void validate_variant(const ModelVariant& variant) {
  const auto expected = make_variant(variant.version, variant.lags);
  if (variant.backbone.family != expected.backbone.family) {
    throw ConfigError(std::string(version_name(variant.version)) + " requires the " +
                      std::string(backbone_name(expected.backbone.family)) + " backbone");
  }
  if (variant.dual_stream != expected.dual_stream) {
    throw ConfigError(std::string(version_name(variant.version)) +
                      (expected.dual_stream ? " is dual-stream" : " is single-stream"));
  }
  if (variant.lags.empty()) throw ConfigError("model needs at least one flow lag");
  if (variant.channels_per_lag != 1 && variant.channels_per_lag != 2) {
    throw ConfigError("channels_per_lag must be 1 or 2");
  }
}

}  // namespace mor::detector
