#include "mor/config/run_config.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mor/detector/options_json.hpp"
#include "mor/error.hpp"

using nlohmann::json;

namespace mor::config {
namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError("unknown config key '" + where + "." + k + "'");
  }
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void RunConfig::finalize() {
  flow::validate_lags(flow.lags, allow_any_lags);
  model.variant.lags = flow.lags;
  model.variant.channels_per_lag = flow.keep_components ? 2 : 1;
  detector::validate_variant(model.variant);
  if (model.input_size.width <= 0 || model.input_size.height <= 0) {
    throw ConfigError("model.input_size must be positive");
  }
  if (flow.max_displacement <= 0.0) throw ConfigError("flow.max_displacement must be positive");
  train.validate();
  infer.validate();
  for (double t : eval.thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("eval.thresholds must lie in (0, 1]");
  }
}

json to_json(const RunConfig& c) {
  const auto& fb = c.flow.farneback;
  const auto& t = c.train;
  return {
      {"flow",
       {{"lags", c.flow.lags},
        {"max_displacement", c.flow.max_displacement},
        {"backend", c.flow.backend},
        {"keep_components", c.flow.keep_components},
        {"farneback",
         {{"pyr_scale", fb.pyr_scale},
          {"levels", fb.levels},
          {"winsize", fb.winsize},
          {"iterations", fb.iterations},
          {"poly_n", fb.poly_n},
          {"poly_sigma", fb.poly_sigma},
          {"border", fb.border}}}}},
      {"model",
       {{"variant", std::string(detector::version_name(c.model.variant.version))},
        {"backbone",
         {{"pretrained", c.model.variant.backbone.pretrained},
          {"weights", c.model.variant.backbone.weights.string()}}},
        {"anchors", c.model.anchors},
        {"head", c.model.head},
        {"input_size", {c.model.input_size.width, c.model.input_size.height}}}},
      {"train",
       {{"learning_rate", t.learning_rate},
        {"batch_size", t.batch_size},
        {"max_iterations", t.max_iterations},
        {"focal_alpha", t.focal_alpha},
        {"focal_gamma", t.focal_gamma},
        {"smooth_l1_beta", t.smooth_l1_beta},
        {"pos_iou", t.assignment.pos_iou},
        {"neg_iou", t.assignment.neg_iou},
        {"checkpoint_every", t.checkpoint_every},
        {"log_every", t.log_every},
        {"seed", t.seed},
        {"deterministic", t.deterministic},
        {"horizontal_flip", t.horizontal_flip},
        {"plateau_decay", t.plateau_decay},
        {"plateau_factor", t.plateau_factor},
        {"plateau_patience", t.plateau_patience}}},
      {"infer",
       {{"confidence_floor", c.infer.confidence_floor},
        {"top_k_per_level", c.infer.top_k_per_level},
        {"nms_iou", c.infer.nms_iou},
        {"max_detections_per_frame", c.infer.max_detections_per_frame}}},
      {"eval", {{"iou_threshold", c.eval.iou_threshold}, {"thresholds", c.eval.thresholds}}},
      {"paths", {{"runs", c.runs_dir.string()}}},
      {"allow_any_lags", c.allow_any_lags},
  };
}

RunConfig from_json(const json& j, RunConfig c) {
  try {
    reject_unknown(j, {"flow", "model", "train", "infer", "eval", "paths", "allow_any_lags"}, "config");
    take(j, "allow_any_lags", c.allow_any_lags);
    if (j.contains("flow")) {
      const auto& f = j["flow"];
      reject_unknown(f, {"lags", "max_displacement", "backend", "keep_components", "farneback"}, "flow");
      take(f, "lags", c.flow.lags);
      take(f, "max_displacement", c.flow.max_displacement);
      take(f, "backend", c.flow.backend);
      take(f, "keep_components", c.flow.keep_components);
      if (f.contains("farneback")) {
        const auto& fb = f["farneback"];
        reject_unknown(fb, {"pyr_scale", "levels", "winsize", "iterations", "poly_n", "poly_sigma", "border"},
                       "flow.farneback");
        take(fb, "pyr_scale", c.flow.farneback.pyr_scale);
        take(fb, "levels", c.flow.farneback.levels);
        take(fb, "winsize", c.flow.farneback.winsize);
        take(fb, "iterations", c.flow.farneback.iterations);
        take(fb, "poly_n", c.flow.farneback.poly_n);
        take(fb, "poly_sigma", c.flow.farneback.poly_sigma);
        take(fb, "border", c.flow.farneback.border);
      }
    }
    if (j.contains("model")) {
      const auto& m = j["model"];
      reject_unknown(m, {"variant", "backbone", "anchors", "head", "input_size"}, "model");
      if (m.contains("variant")) {
        const auto keep = c.model.variant.backbone;
        c.model.variant = detector::make_variant(
            detector::version_from_string(m["variant"].get<std::string>()), c.flow.lags);
        c.model.variant.backbone.pretrained = keep.pretrained;
        c.model.variant.backbone.weights = keep.weights;
      }
      if (m.contains("backbone")) {
        const auto& b = m["backbone"];
        reject_unknown(b, {"pretrained", "weights"}, "model.backbone");
        take(b, "pretrained", c.model.variant.backbone.pretrained);
        if (b.contains("weights")) c.model.variant.backbone.weights = b["weights"].get<std::string>();
      }
      if (m.contains("anchors")) c.model.anchors = m["anchors"].get<detector::AnchorConfig>();
      if (m.contains("head")) c.model.head = m["head"].get<detector::HeadConfig>();
      if (m.contains("input_size")) {
        const auto s = m["input_size"].get<std::vector<int>>();
        if (s.size() != 2) throw ConfigError("model.input_size must be [width, height]");
        c.model.input_size = {s[0], s[1]};
      }
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      reject_unknown(t,
                     {"learning_rate", "batch_size", "max_iterations", "focal_alpha", "focal_gamma",
                      "smooth_l1_beta", "pos_iou", "neg_iou", "checkpoint_every", "log_every", "seed",
                      "deterministic", "horizontal_flip", "plateau_decay", "plateau_factor",
                      "plateau_patience"},
                     "train");
      take(t, "learning_rate", c.train.learning_rate);
      take(t, "batch_size", c.train.batch_size);
      take(t, "max_iterations", c.train.max_iterations);
      take(t, "focal_alpha", c.train.focal_alpha);
      take(t, "focal_gamma", c.train.focal_gamma);
      take(t, "smooth_l1_beta", c.train.smooth_l1_beta);
      take(t, "pos_iou", c.train.assignment.pos_iou);
      take(t, "neg_iou", c.train.assignment.neg_iou);
      take(t, "checkpoint_every", c.train.checkpoint_every);
      take(t, "log_every", c.train.log_every);
      take(t, "seed", c.train.seed);
      take(t, "deterministic", c.train.deterministic);
      take(t, "horizontal_flip", c.train.horizontal_flip);
      take(t, "plateau_decay", c.train.plateau_decay);
      take(t, "plateau_factor", c.train.plateau_factor);
      take(t, "plateau_patience", c.train.plateau_patience);
    }
    if (j.contains("infer")) {
      const auto& i = j["infer"];
      reject_unknown(i, {"confidence_floor", "top_k_per_level", "nms_iou", "max_detections_per_frame"},
                     "infer");
      take(i, "confidence_floor", c.infer.confidence_floor);
      take(i, "top_k_per_level", c.infer.top_k_per_level);
      take(i, "nms_iou", c.infer.nms_iou);
      take(i, "max_detections_per_frame", c.infer.max_detections_per_frame);
    }
    if (j.contains("eval")) {
      const auto& e = j["eval"];
      reject_unknown(e, {"iou_threshold", "thresholds"}, "eval");
      take(e, "iou_threshold", c.eval.iou_threshold);
      take(e, "thresholds", c.eval.thresholds);
    }
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      reject_unknown(p, {"runs"}, "paths");
      if (p.contains("runs")) c.runs_dir = p["runs"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  c.model.variant.lags = c.flow.lags;
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, std::move(base));
}

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a over the canonical dump; nlohmann orders object keys.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 10);
}

std::filesystem::path create_run_dir(const RunConfig& cfg, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &tm);
  const std::string base = std::string(stamp) + "-" + command + "-" + config_hash(cfg);
  std::filesystem::create_directories(cfg.runs_dir);
  for (int n = 0;; ++n) {
    auto dir = cfg.runs_dir / (n == 0 ? base : base + "-" + std::to_string(n));
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

}  // namespace mor::config
