#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mor/eval/average_precision.hpp"

namespace mor::eval {

/// TSV with one row per (threshold, scope, class): scope is `pooled` or a video name,
/// class is a class name or `mAP`. Values are percentages with two decimals.
[[nodiscard]] std::string format_report_table(const std::vector<EvalReport>& reports);

/// `iou_threshold\tmAP` rows (pooled mAP), for plotting mAP against IoU.
[[nodiscard]] std::string format_sweep_series(const std::vector<EvalReport>& reports);

[[nodiscard]] nlohmann::json report_to_json(const EvalReport& report);

}  // namespace mor::eval
