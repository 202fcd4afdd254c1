#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <torch/torch.h>

#include "mor/core/types.hpp"
#include "mor/detector/box_coder.hpp"
#include "mor/detector/model.hpp"
#include "mor/flow/cascade.hpp"
#include "mor/flow/ring_buffer.hpp"
#include "mor/inference/detection.hpp"

namespace mor::inference {

/// A trained model plus everything needed to turn frames into detections.
class Detector {
 public:
  Detector(detector::MorNet model, InferenceConfig config, flow::FlowConfig flow,
           torch::Device device = torch::kCPU);

  /// Detections for frame `t`. Buffered frames must already be at the model input
  /// size; only frames t and t - lag are read. Boxes are in input coordinates.
  [[nodiscard]] std::vector<Detection> infer_frame(const flow::FrameRingBuffer& buffer, std::int64_t t) const;

  /// Flow stage alone: the network inputs for frame `t`.
  [[nodiscard]] flow::MotionSaliencyStack prepare(const flow::FrameRingBuffer& buffer, std::int64_t t) const;
  /// Model stage alone.
  [[nodiscard]] std::vector<Detection> detect(const flow::MotionSaliencyStack& stack) const;

  [[nodiscard]] cv::Size input_size() const noexcept { return model_->options().input_size; }
  [[nodiscard]] int max_lag() const noexcept;
  [[nodiscard]] const detector::AnchorGrid& anchors() const noexcept { return anchors_; }
  [[nodiscard]] const InferenceConfig& config() const noexcept { return config_; }
  [[nodiscard]] const flow::FlowConfig& flow_config() const noexcept { return flow_; }
  [[nodiscard]] detector::MorNet model() const noexcept { return model_; }

 private:
  mutable detector::MorNet model_;
  InferenceConfig config_;
  flow::FlowConfig flow_;
  flow::FrameNormalization norm_;
  std::shared_ptr<const flow::FlowBackend> backend_;
  torch::Device device_;
  detector::AnchorGrid anchors_;
  detector::BoxCoder coder_;
};

/// Per processed frame: source frame, its index and detections in source coordinates.
using FrameSink = std::function<void(const FrameRecord& source, const std::vector<Detection>& detections)>;

struct StreamTiming {
  std::int64_t frames_read{0};
  std::int64_t frames_processed{0};
  double wall_seconds{0.0};
  double flow_seconds{0.0};
  double model_seconds{0.0};
};

/// Streams `video` through ingest -> flow -> model stages connected by bounded
/// queues. The first max(lags) frames only fill history. `sink` is called in frame order.
StreamTiming run_stream(const Detector& detector, const VideoSequence& video, const FrameSink& sink,
                        std::size_t queue_capacity = 4);

struct RuntimeProfile {
  std::int64_t frames{0};
  double wall_seconds{0.0};
  /// Processed frames per second of wall-clock, flow computation included.
  double fps_inclusive{0.0};
  /// Processed frames per second of model time only (forward + post-processing).
  double fps_exclusive{0.0};
  std::int64_t parameter_count{0};
  std::int64_t checkpoint_bytes{0};
};

/// Runs the stream once and reports throughput. `checkpoint` may be empty.
[[nodiscard]] RuntimeProfile profile_inference(const Detector& detector, const VideoSequence& video,
                                               const std::filesystem::path& checkpoint = {});

struct FeatureHeatmap {
  std::string name;
  cv::Mat image;  ///< 8-bit BGR color map at model input size
};

/// Channel-mean activation maps of the motion-stream stem, P3 and P4.
[[nodiscard]] std::vector<FeatureHeatmap> visualize_features(detector::MorNet model,
                                                             const flow::MotionSaliencyStack& stack,
                                                             torch::Device device = torch::kCPU);

}  // namespace mor::inference
