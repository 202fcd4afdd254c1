#include "mor/inference/infer.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <thread>

#include <opencv2/imgproc.hpp>

#include "mor/core/resize.hpp"
#include "mor/detector/anchors.hpp"
#include "mor/detector/runtime.hpp"
#include "mor/error.hpp"
#include "mor/inference/postprocess.hpp"
#include "mor/training/trainer.hpp"
#include "mor/util/bounded_queue.hpp"

namespace mor::inference {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Detector::Detector(detector::MorNet model, InferenceConfig config, flow::FlowConfig flow, torch::Device device)
    : model_(std::move(model)),
      config_(config),
      flow_(std::move(flow)),
      norm_(training::normalization_for(model_->options().variant.backbone.family)),
      backend_(flow::make_backend(flow_.backend, flow_.farneback)),
      device_(device) {
  config_.validate();
  if (flow_.lags != model_->options().variant.lags) {
    throw ConfigError("flow lags do not match the model's lags (" + model_->options().variant.tag() + ")");
  }
  anchors_ = detector::generate_anchors(model_->options().input_size, model_->options().anchors);
  model_->to(device_);
  model_->eval();
}

int Detector::max_lag() const noexcept { return *std::max_element(flow_.lags.begin(), flow_.lags.end()); }

flow::MotionSaliencyStack Detector::prepare(const flow::FrameRingBuffer& buffer, std::int64_t t) const {
  const auto cascade = flow::build_cascade(buffer, t, flow_.lags, *backend_);
  const auto current = buffer.at(t);
  if (current.pixels.size() != input_size()) {
    throw ShapeError("buffered frames must be at the model input size");
  }
  return flow::assemble_asof(cascade, current, flow_.max_displacement, norm_, flow_.keep_components);
}

std::vector<Detection> Detector::detect(const flow::MotionSaliencyStack& stack) const {
  torch::NoGradGuard no_grad;
  const auto flow_t = detector::mat_to_tensor(stack.flow_channels).to(device_);
  const auto frame_t = detector::mat_to_tensor(stack.frame_channels).to(device_);
  const auto pred = model_->forward(flow_t, frame_t);
  const auto logits = pred.class_logits[0].to(torch::kCPU, torch::kFloat32).contiguous();
  const auto deltas = pred.box_deltas[0].to(torch::kCPU, torch::kFloat32).contiguous();
  return postprocess({logits.data_ptr<float>(), static_cast<std::size_t>(logits.numel())},
                     {deltas.data_ptr<float>(), static_cast<std::size_t>(deltas.numel())}, anchors_, coder_,
                     config_, stack.size(), stack.frame_index);
}

std::vector<Detection> Detector::infer_frame(const flow::FrameRingBuffer& buffer, std::int64_t t) const {
  return detect(prepare(buffer, t));
}

StreamTiming run_stream(const Detector& detector, const VideoSequence& video, const FrameSink& sink,
                        std::size_t queue_capacity) {
  struct Item {
    FrameRecord source;
    flow::MotionSaliencyStack stack;
  };
  StreamTiming timing;
  const auto start = Clock::now();
  util::BoundedQueue<Item> queue(queue_capacity);
  std::exception_ptr flow_error;
  const int max_lag = detector.max_lag();

  std::thread flow_stage([&] {
    try {
      flow::FrameRingBuffer buffer(static_cast<std::size_t>(max_lag) + 1);
      for (std::size_t i = 0; i < video.length(); ++i) {
        auto source = video.frame(i);
        FrameRecord resized = source;
        if (source.pixels.size() != detector.input_size()) {
          cv::resize(source.pixels, resized.pixels, detector.input_size(), 0, 0, cv::INTER_LINEAR);
        }
        buffer.push(std::move(resized));
        ++timing.frames_read;
        if (static_cast<std::int64_t>(i) < max_lag) continue;
        const auto t0 = Clock::now();
        Item item{std::move(source), detector.prepare(buffer, static_cast<std::int64_t>(i))};
        timing.flow_seconds += seconds_since(t0);
        if (!queue.push(std::move(item))) break;
      }
    } catch (...) {
      flow_error = std::current_exception();
    }
    queue.close();
  });

  std::exception_ptr model_error;
  try {
    while (auto item = queue.pop()) {
      const auto t0 = Clock::now();
      auto dets = detector.detect(item->stack);
      timing.model_seconds += seconds_since(t0);
      dets = rescale_detections(std::move(dets), detector.input_size(), item->source.pixels.size());
      ++timing.frames_processed;
      if (sink) sink(item->source, dets);
    }
  } catch (...) {
    model_error = std::current_exception();
    queue.close();
  }
  flow_stage.join();
  if (model_error) std::rethrow_exception(model_error);
  if (flow_error) std::rethrow_exception(flow_error);
  timing.wall_seconds = seconds_since(start);
  return timing;
}

RuntimeProfile profile_inference(const Detector& detector, const VideoSequence& video,
                                 const std::filesystem::path& checkpoint) {
  const auto timing = run_stream(detector, video, {});
  RuntimeProfile p;
  p.frames = timing.frames_processed;
  p.wall_seconds = timing.wall_seconds;
  if (timing.wall_seconds > 0) p.fps_inclusive = static_cast<double>(p.frames) / timing.wall_seconds;
  if (timing.model_seconds > 0) p.fps_exclusive = static_cast<double>(p.frames) / timing.model_seconds;
  p.parameter_count = detector.model()->parameter_count();
  if (!checkpoint.empty()) p.checkpoint_bytes = static_cast<std::int64_t>(std::filesystem::file_size(checkpoint));
  return p;
}

std::vector<FeatureHeatmap> visualize_features(detector::MorNet model, const flow::MotionSaliencyStack& stack,
                                               torch::Device device) {
  torch::NoGradGuard no_grad;
  model->to(device);
  model->eval();
  const auto taps = model->features(detector::mat_to_tensor(stack.flow_channels).to(device),
                                    detector::mat_to_tensor(stack.frame_channels).to(device));
  const auto render = [&](const std::string& name, const torch::Tensor& activation) {
    auto mean = activation[0].mean(0).to(torch::kCPU, torch::kFloat32).contiguous();
    cv::Mat m(static_cast<int>(mean.size(0)), static_cast<int>(mean.size(1)), CV_32F, mean.data_ptr<float>());
    cv::Mat scaled, gray, color;
    cv::normalize(m, scaled, 0, 255, cv::NORM_MINMAX);
    scaled.convertTo(gray, CV_8U);
    cv::resize(gray, gray, stack.size(), 0, 0, cv::INTER_NEAREST);
    cv::applyColorMap(gray, color, cv::COLORMAP_JET);
    return FeatureHeatmap{name, color};
  };
  return {render("stem", taps.stem), render("p3", taps.pyramid.levels[0]), render("p4", taps.pyramid.levels[1])};
}

}  // namespace mor::inference
