#pragma once

#include <memory>
#include <string>

#include <opencv2/core.hpp>

#include "mor/core/types.hpp"

namespace mor::flow {

/// Dense displacement field from a history frame to the current frame.
struct FlowField {
  cv::Mat u;  ///< CV_32F, horizontal displacement in pixels
  cv::Mat v;  ///< CV_32F, vertical displacement in pixels
  int lag{1};

  [[nodiscard]] cv::Size size() const noexcept { return u.size(); }
};

/// Polynomial-expansion flow parameters (OpenCV's Farneback naming).
struct FarnebackParams {
  double pyr_scale{0.5};
  int levels{3};
  int winsize{15};
  int iterations{3};
  int poly_n{5};
  double poly_sigma{1.2};
  /// Replicated margin added around both frames and cropped from the result.
  int border{8};
};

/// Pluggable dense flow backend. Implementations are stateless and thread-safe.
class FlowBackend {
 public:
  virtual ~FlowBackend() = default;
  /// Both inputs are single-channel 8-bit luminance images of equal size.
  [[nodiscard]] virtual FlowField compute(const cv::Mat& prev_gray, const cv::Mat& curr_gray) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

class FarnebackBackend final : public FlowBackend {
 public:
  explicit FarnebackBackend(FarnebackParams params = {}) : params_(params) {}
  [[nodiscard]] FlowField compute(const cv::Mat& prev_gray, const cv::Mat& curr_gray) const override;
  [[nodiscard]] std::string name() const override { return "farneback"; }
  [[nodiscard]] const FarnebackParams& params() const noexcept { return params_; }

 private:
  FarnebackParams params_;
};

/// Factory for the `flow.backend` config key.
[[nodiscard]] std::shared_ptr<const FlowBackend> make_backend(const std::string& name,
                                                              const FarnebackParams& params = {});

/// ITU-R BT.601 luminance of an 8-bit BGR (or already gray) image.
[[nodiscard]] cv::Mat to_luminance(const cv::Mat& bgr);

/// Dense flow from `prev` to `curr`. Throws ShapeError on a size mismatch.
[[nodiscard]] FlowField compute_dense_flow(const FrameRecord& prev, const FrameRecord& curr,
                                           const FlowBackend& backend);

/// Uses the default Farneback backend.
[[nodiscard]] FlowField compute_dense_flow(const FrameRecord& prev, const FrameRecord& curr);

}  // namespace mor::flow
