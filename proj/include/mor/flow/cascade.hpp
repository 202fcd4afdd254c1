#pragma once

#include <memory>
#include <vector>

#include <opencv2/core.hpp>

#include "mor/flow/flow.hpp"
#include "mor/flow/ring_buffer.hpp"

namespace mor::flow {

/// Flow fields between frame t and frames t - lag, one per configured lag.
struct FlowCascade {
  std::vector<FlowField> maps;
  std::vector<int> lags;
  std::int64_t frame_index{0};

  [[nodiscard]] std::size_t depth() const noexcept { return lags.size(); }
};

/// How the current frame is normalized for the backbone that consumes it.
enum class FrameNormalization {
  /// (x / 255 - ImageNet mean) / ImageNet std, RGB order.
  ImageNet,
  /// x / 127.5 - 1, RGB order.
  SymmetricUnit,
};

struct FlowConfig {
  std::vector<int> lags{1, 3};
  double max_displacement{32.0};
  std::string backend{"farneback"};
  FarnebackParams farneback;
  /// Keep (u, v) per lag instead of magnitude: 2T channels, signed, scaled by max_displacement.
  bool keep_components{false};
};

/// The four cascade configurations the model family is defined for.
[[nodiscard]] const std::vector<std::vector<int>>& supported_lag_sets();
/// Lags must be positive and strictly increasing; unless `allow_any` the set must
/// also be one of supported_lag_sets(). Throws ConfigError.
void validate_lags(const std::vector<int>& lags, bool allow_any = false);

/// Network inputs for one frame: flow saliency (T x H x W) and current frame (3 x H x W).
struct MotionSaliencyStack {
  /// CV_32FC(T) saliency channels in [0, 1] (or [-1, 1] when keeping components).
  cv::Mat flow_channels;
  /// CV_32FC3, normalized, RGB channel order.
  cv::Mat frame_channels;
  std::int64_t frame_index{0};

  [[nodiscard]] int flow_depth() const noexcept { return flow_channels.channels(); }
  [[nodiscard]] cv::Size size() const noexcept { return frame_channels.size(); }
};

/// Builds the cascade for frame `t` from buffered history. Reads only frames
/// `t` and `t - lag`; throws NotEnoughHistory naming the first missing index.
[[nodiscard]] FlowCascade build_cascade(const FrameRingBuffer& buffer, std::int64_t t,
                                        const std::vector<int>& lags, const FlowBackend& backend);

/// Reduces each field to a saliency channel and stacks it with the normalized frame.
[[nodiscard]] MotionSaliencyStack assemble_asof(const FlowCascade& cascade, const FrameRecord& frame,
                                                double max_displacement = 32.0,
                                                FrameNormalization norm = FrameNormalization::ImageNet,
                                                bool keep_components = false);

[[nodiscard]] cv::Mat normalize_frame(const cv::Mat& bgr, FrameNormalization norm);

/// Per-lag 8-bit grayscale rendering of the flow channels, for debugging.
[[nodiscard]] std::vector<cv::Mat> flow_debug_images(const MotionSaliencyStack& stack);

}  // namespace mor::flow
