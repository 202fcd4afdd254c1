#include "mor/detector/options_json.hpp"

namespace mor::detector {

void to_json(nlohmann::json& j, const AnchorConfig& c) {
  j = {{"base_size", c.base_size}, {"scales", c.scales}, {"ratios", c.ratios}};
}

void from_json(const nlohmann::json& j, AnchorConfig& c) {
  c.base_size = j.value("base_size", c.base_size);
  c.scales = j.value("scales", c.scales);
  c.ratios = j.value("ratios", c.ratios);
}

void to_json(nlohmann::json& j, const HeadConfig& c) {
  j = {{"num_classes", c.num_classes},
       {"pyramid_channels", c.pyramid_channels},
       {"head_convs", c.head_convs},
       {"head_channels", c.head_channels},
       {"prior_probability", c.prior_probability}};
}

void from_json(const nlohmann::json& j, HeadConfig& c) {
  c.num_classes = j.value("num_classes", c.num_classes);
  c.pyramid_channels = j.value("pyramid_channels", c.pyramid_channels);
  c.head_convs = j.value("head_convs", c.head_convs);
  c.head_channels = j.value("head_channels", c.head_channels);
  c.prior_probability = j.value("prior_probability", c.prior_probability);
}

void to_json(nlohmann::json& j, const ModelVariant& v) {
  j = {{"variant", std::string(version_name(v.version))},
       {"lags", v.lags},
       {"channels_per_lag", v.channels_per_lag},
       {"backbone",
        {{"family", std::string(backbone_name(v.backbone.family))},
         {"pretrained", v.backbone.pretrained},
         {"weights", v.backbone.weights.string()}}}};
}

void from_json(const nlohmann::json& j, ModelVariant& v) {
  const auto version = version_from_string(j.at("variant").get<std::string>());
  auto lags = j.value("lags", v.lags);
  v = make_variant(version, std::move(lags));
  v.channels_per_lag = j.value("channels_per_lag", 1);
  if (j.contains("backbone")) {
    const auto& b = j["backbone"];
    v.backbone.pretrained = b.value("pretrained", false);
    v.backbone.weights = b.value("weights", std::string());
  }
}

}  // namespace mor::detector
