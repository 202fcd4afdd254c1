#include "mor/eval/report.hpp"

#include <cstdio>

namespace mor::eval {
namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string thr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::string out = "iou_threshold\tscope\tclass\tvalue\n";
  for (const auto& r : reports) {
    const auto t = thr(r.iou_threshold);
    for (const auto& [label, ap] : r.per_class_ap) {
      out += t + "\tpooled\t" + std::string(class_name(label)) + "\t" + pct(ap) + "\n";
    }
    out += t + "\tpooled\tmAP\t" + pct(r.map_value) + "\n";
    for (const auto& [video, score] : r.per_video) {
      for (const auto& [label, ap] : score.per_class_ap) {
        out += t + "\t" + video + "\t" + std::string(class_name(label)) + "\t" + pct(ap) + "\n";
      }
      out += t + "\t" + video + "\tmAP\t" + pct(score.map_value) + "\n";
    }
    if (r.video_average) out += t + "\tvideo_average\tmAP\t" + pct(*r.video_average) + "\n";
  }
  return out;
}

std::string format_sweep_series(const std::vector<EvalReport>& reports) {
  std::string out = "iou_threshold\tmAP\n";
  for (const auto& r : reports) out += thr(r.iou_threshold) + "\t" + pct(r.map_value) + "\n";
  return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["iou_threshold"] = r.iou_threshold;
  j["map"] = r.map_value;
  for (const auto& [label, ap] : r.per_class_ap) j["per_class_ap"][std::string(class_name(label))] = ap;
  j["absent_classes"] = nlohmann::json::array();
  for (auto c : r.absent_classes) j["absent_classes"].push_back(std::string(class_name(c)));
  for (const auto& [video, score] : r.per_video) {
    auto& v = j["per_video"][video];
    v["map"] = score.map_value;
    for (const auto& [label, ap] : score.per_class_ap) v["per_class_ap"][std::string(class_name(label))] = ap;
  }
  if (r.video_average) j["video_average"] = *r.video_average;
  return j;
}

}  // namespace mor::eval
