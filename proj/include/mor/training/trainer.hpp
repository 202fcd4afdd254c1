#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>
#include <torch/torch.h>

#include "mor/core/types.hpp"
#include "mor/detector/box_coder.hpp"
#include "mor/detector/checkpoint.hpp"
#include "mor/detector/model.hpp"
#include "mor/eval/average_precision.hpp"
#include "mor/flow/cascade.hpp"
#include "mor/inference/infer.hpp"
#include "mor/training/train_config.hpp"

namespace mor::training {

struct LossBreakdown {
  double classification_loss{0.0};
  double regression_loss{0.0};
  double total{0.0};
};

/// One training example: assembled network inputs plus the movers of that frame,
/// both at model input resolution.
struct Sample {
  flow::MotionSaliencyStack stack;
  std::vector<MovingObjectInstance> ground_truth;
  std::string video;
};

/// Frame normalization expected by a backbone family.
[[nodiscard]] flow::FrameNormalization normalization_for(detector::BackboneFamily family);

/// Streams every video through a ring buffer at `input_size` and assembles one
/// sample per frame that has full flow history (frames t >= max(lags)).
[[nodiscard]] std::vector<Sample> prepare_samples(const std::vector<VideoSequence>& videos,
                                                  const flow::FlowConfig& flow, cv::Size input_size,
                                                  flow::FrameNormalization norm);

/// Dense targets for one sample.
struct DenseTargets {
  torch::Tensor labels;         ///< [N] int64
  torch::Tensor target_deltas;  ///< [N, 4] float
  torch::Tensor positive;       ///< [N] bool
};

[[nodiscard]] DenseTargets build_targets(const detector::AnchorGrid& anchors,
                                         const std::vector<MovingObjectInstance>& gt,
                                         const detector::BoxCoder& coder, AssignmentThresholds th);

struct SampleScore {
  eval::EvalReport report;
  /// Highest score among detections that overlap no same-class ground truth at
  /// the report threshold (0 when there is none).
  double max_false_positive_score{0.0};
  std::vector<inference::Detection> detections;
};

/// Runs `detector` on prepared samples and scores it against their ground truth,
/// per video and pooled. Detections are in model input coordinates.
[[nodiscard]] SampleScore score_samples(const inference::Detector& detector, const std::vector<Sample>& samples,
                                        double iou_threshold = 0.5);

/// Owns the model weights and the optimizer for one run (single writer).
class Trainer {
 public:
  using StepCallback = std::function<void(std::int64_t step, const LossBreakdown&)>;

  Trainer(detector::MorNet model, TrainConfig config, torch::Device device = torch::kCPU);

  /// Forward, loss and one optimizer update. The returned losses are the
  /// pre-update values. Throws NumericError (naming the step) on a non-finite loss.
  LossBreakdown train_step(const Sample& sample);

  /// Trains until `step() == config.max_iterations`, visiting samples in a
  /// seeded per-epoch shuffled order that depends only on (seed, step).
  void train_loop(const std::vector<Sample>& samples, const StepCallback& on_step = {});

  /// Index into `samples` (of size n) visited at `step`.
  [[nodiscard]] std::size_t sample_index(std::int64_t step, std::size_t n) const;

  void save_checkpoint(const std::filesystem::path& path, const nlohmann::json& config = {},
                       const nlohmann::json& metrics = {});
  /// Restores weights, optimizer state and step from a checkpoint of the same architecture.
  void resume(const std::filesystem::path& path);

  [[nodiscard]] std::int64_t step() const noexcept { return step_; }
  [[nodiscard]] double learning_rate() const;
  [[nodiscard]] detector::MorNet& model() noexcept { return model_; }
  [[nodiscard]] const detector::AnchorGrid& anchors() const noexcept { return anchors_; }
  [[nodiscard]] const TrainConfig& config() const noexcept { return config_; }

 private:
  LossBreakdown compute(const Sample& sample, bool flip, torch::Tensor* total);
  void maybe_decay(double loss);

  detector::MorNet model_;
  TrainConfig config_;
  torch::Device device_;
  detector::AnchorGrid anchors_;
  detector::BoxCoder coder_;
  std::unique_ptr<torch::optim::Adam> optimizer_;
  std::int64_t step_{0};
  double window_sum_{0.0};
  std::int64_t window_count_{0};
  double best_window_{0.0};
  bool have_window_{false};
};

}  // namespace mor::training
