#include "mor/flow/cascade.hpp"

#include <algorithm>

#include <opencv2/imgproc.hpp>

#include "mor/error.hpp"

namespace mor::flow {

const std::vector<std::vector<int>>& supported_lag_sets() {
  static const std::vector<std::vector<int>> sets{{1}, {1, 3}, {1, 5}, {1, 3, 5}};
  return sets;
}

void validate_lags(const std::vector<int>& lags, bool allow_any) {
  if (lags.empty()) throw ConfigError("flow.lags must not be empty");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (lags[i] < 1) throw ConfigError("flow lags must be >= 1");
    if (i > 0 && lags[i] <= lags[i - 1]) throw ConfigError("flow lags must be strictly increasing");
  }
  if (allow_any) return;
  const auto& sets = supported_lag_sets();
  if (std::find(sets.begin(), sets.end(), lags) == sets.end()) {
    std::string s;
    for (int l : lags) s += (s.empty() ? "" : ",") + std::to_string(l);
    throw ConfigError("unsupported lag set {" + s +
                      "}; expected one of {1}, {1,3}, {1,5}, {1,3,5} (use the override to allow it)");
  }
}

FlowCascade build_cascade(const FrameRingBuffer& buffer, std::int64_t t, const std::vector<int>& lags,
                          const FlowBackend& backend) {
  validate_lags(lags, true);
  // Check availability first so a missing frame is reported before any flow work.
  if (!buffer.contains(t)) throw NotEnoughHistory(t);
  for (int lag : lags) {
    if (!buffer.contains(t - lag)) throw NotEnoughHistory(t - lag);
  }
  const FrameRecord curr = buffer.at(t);
  const cv::Mat curr_gray = to_luminance(curr.pixels);
  FlowCascade cascade;
  cascade.frame_index = t;
  cascade.lags = lags;
  for (int lag : lags) {
    const FrameRecord prev = buffer.at(t - lag);
    if (prev.pixels.size() != curr.pixels.size()) throw ShapeError("buffered frames differ in shape");
    auto field = backend.compute(to_luminance(prev.pixels), curr_gray);
    field.lag = lag;
    cascade.maps.push_back(std::move(field));
  }
  return cascade;
}

cv::Mat normalize_frame(const cv::Mat& bgr, FrameNormalization norm) {
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  cv::Mat out;
  if (norm == FrameNormalization::SymmetricUnit) {
    rgb.convertTo(out, CV_32FC3, 1.0 / 127.5, -1.0);
    return out;
  }
  rgb.convertTo(out, CV_32FC3, 1.0 / 255.0);
  const cv::Scalar mean(0.485, 0.456, 0.406);
  const cv::Scalar stdev(0.229, 0.224, 0.225);
  cv::subtract(out, mean, out);
  cv::divide(out, stdev, out);
  return out;
}

MotionSaliencyStack assemble_asof(const FlowCascade& cascade, const FrameRecord& frame,
                                  double max_displacement, FrameNormalization norm,
                                  bool keep_components) {
  if (cascade.maps.empty()) throw ShapeError("empty flow cascade");
  if (max_displacement <= 0.0) throw ConfigError("flow.max_displacement must be positive");
  std::vector<cv::Mat> channels;
  for (const auto& f : cascade.maps) {
    if (f.size() != frame.pixels.size()) throw ShapeError("flow field and frame differ in shape");
    if (keep_components) {
      cv::Mat u, v;
      f.u.convertTo(u, CV_32F, 1.0 / max_displacement);
      f.v.convertTo(v, CV_32F, 1.0 / max_displacement);
      channels.push_back(cv::min(cv::max(u, -1.0), 1.0));
      channels.push_back(cv::min(cv::max(v, -1.0), 1.0));
    } else {
      cv::Mat mag;
      cv::magnitude(f.u, f.v, mag);
      mag = cv::min(mag, max_displacement);
      mag.convertTo(mag, CV_32F, 1.0 / max_displacement);
      channels.push_back(mag);
    }
  }
  MotionSaliencyStack stack;
  cv::merge(channels, stack.flow_channels);
  stack.frame_channels = normalize_frame(frame.pixels, norm);
  stack.frame_index = frame.index;
  return stack;
}

std::vector<cv::Mat> flow_debug_images(const MotionSaliencyStack& stack) {
  std::vector<cv::Mat> parts;
  cv::split(stack.flow_channels, parts);
  std::vector<cv::Mat> out;
  for (auto& p : parts) {
    cv::Mat img;
    p.convertTo(img, CV_8U, 255.0);
    out.push_back(img);
  }
  return out;
}

}  // namespace mor::flow
