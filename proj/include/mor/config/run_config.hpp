#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mor/detector/anchors.hpp"
#include "mor/detector/variant.hpp"
#include "mor/flow/cascade.hpp"
#include "mor/inference/detection.hpp"
#include "mor/training/train_config.hpp"

namespace mor::config {

struct ModelConfig {
  detector::ModelVariant variant = detector::make_variant(detector::Version::V1, {1, 3});
  detector::AnchorConfig anchors;
  detector::HeadConfig head;
  cv::Size input_size{608, 608};
};

struct EvalConfig {
  double iou_threshold{0.5};
  std::vector<double> thresholds{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
};

/// The merged configuration tree of a run. Precedence when building one:
/// command-line flags, then the config file, then these defaults.
struct RunConfig {
  flow::FlowConfig flow;
  ModelConfig model;
  training::TrainConfig train;
  inference::InferenceConfig infer;
  EvalConfig eval;
  std::filesystem::path runs_dir{"runs"};
  /// Accept lag sets outside the four supported configurations.
  bool allow_any_lags{false};

  /// Keeps model.variant.lags in sync with flow.lags and checks every section.
  void finalize();
};

[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);
/// Values absent from `j` keep their defaults; unknown keys are rejected.
[[nodiscard]] RunConfig from_json(const nlohmann::json& j, RunConfig base = {});
[[nodiscard]] RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Short stable hash of the serialized configuration.
[[nodiscard]] std::string config_hash(const RunConfig& cfg);

/// Creates `<runs_dir>/<UTC timestamp>-<hash>[-N]/`, never reusing an existing directory.
[[nodiscard]] std::filesystem::path create_run_dir(const RunConfig& cfg, const std::string& command);

}  // namespace mor::config
