#include "mor/flow/flow.hpp"

#include <algorithm>

#include <opencv2/imgproc.hpp>
#include <opencv2/video/tracking.hpp>

#include "mor/error.hpp"

namespace mor::flow {

cv::Mat to_luminance(const cv::Mat& bgr) {
  if (bgr.channels() == 1) return bgr;
  cv::Mat gray;
  cv::cvtColor(bgr, gray, cv::COLOR_BGR2GRAY);  // 0.299 R + 0.587 G + 0.114 B
  return gray;
}

FlowField FarnebackBackend::compute(const cv::Mat& prev_gray, const cv::Mat& curr_gray) const {
  const int pad = std::max(0, params_.border);
  cv::Mat prev, curr, flow;
  cv::copyMakeBorder(prev_gray, prev, pad, pad, pad, pad, cv::BORDER_REPLICATE);
  cv::copyMakeBorder(curr_gray, curr, pad, pad, pad, pad, cv::BORDER_REPLICATE);
  cv::calcOpticalFlowFarneback(prev, curr, flow, params_.pyr_scale, params_.levels,
                               params_.winsize, params_.iterations, params_.poly_n,
                               params_.poly_sigma, 0);
  FlowField out;
  cv::Mat parts[2];
  cv::split(flow(cv::Rect(pad, pad, prev_gray.cols, prev_gray.rows)), parts);
  out.u = parts[0];
  out.v = parts[1];
  // Textureless inputs can leave NaNs in the solver; the contract is finite output.
  cv::patchNaNs(out.u, 0.0);
  cv::patchNaNs(out.v, 0.0);
  return out;
}

std::shared_ptr<const FlowBackend> make_backend(const std::string& name,
                                                const FarnebackParams& params) {
  if (name == "farneback") return std::make_shared<FarnebackBackend>(params);
  throw ConfigError("unknown flow backend '" + name + "'");
}

FlowField compute_dense_flow(const FrameRecord& prev, const FrameRecord& curr,
                             const FlowBackend& backend) {
  if (prev.pixels.size() != curr.pixels.size() || prev.pixels.empty()) {
    throw ShapeError("flow frames differ in shape or are empty");
  }
  auto f = backend.compute(to_luminance(prev.pixels), to_luminance(curr.pixels));
  f.lag = static_cast<int>(curr.index - prev.index);
  if (f.lag < 1) f.lag = 1;
  return f;
}

FlowField compute_dense_flow(const FrameRecord& prev, const FrameRecord& curr) {
  static const FarnebackBackend backend;
  return compute_dense_flow(prev, curr, backend);
}

}  // namespace mor::flow
