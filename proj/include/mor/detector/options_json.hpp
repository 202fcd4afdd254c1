#pragma once

#include <json.hpp>
#include <opencv2/core.hpp>

#include "mor/detector/anchors.hpp"
#include "mor/detector/variant.hpp"

namespace mor::detector {

void to_json(nlohmann::json& j, const AnchorConfig& c);
void from_json(const nlohmann::json& j, AnchorConfig& c);
void to_json(nlohmann::json& j, const HeadConfig& c);
void from_json(const nlohmann::json& j, HeadConfig& c);
void to_json(nlohmann::json& j, const ModelVariant& v);
void from_json(const nlohmann::json& j, ModelVariant& v);

}  // namespace mor::detector
