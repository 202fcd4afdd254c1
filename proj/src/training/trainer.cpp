#include "mor/training/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <opencv2/core.hpp>

#include "mor/core/geometry.hpp"
#include "mor/core/resize.hpp"
#include "mor/detector/runtime.hpp"
#include "mor/error.hpp"
#include "mor/flow/ring_buffer.hpp"
#include "mor/training/losses.hpp"

namespace mor::training {

flow::FrameNormalization normalization_for(detector::BackboneFamily family) {
  return family == detector::BackboneFamily::ResNet50 ? flow::FrameNormalization::ImageNet
                                                      : flow::FrameNormalization::SymmetricUnit;
}

std::vector<Sample> prepare_samples(const std::vector<VideoSequence>& videos, const flow::FlowConfig& fc,
                                    cv::Size input_size, flow::FrameNormalization norm) {
  const auto backend = flow::make_backend(fc.backend, fc.farneback);
  const int max_lag = *std::max_element(fc.lags.begin(), fc.lags.end());
  std::vector<Sample> out;
  for (const auto& video : videos) {
    flow::FrameRingBuffer buffer(static_cast<std::size_t>(max_lag) + 1);
    for (std::size_t i = 0; i < video.length(); ++i) {
      const auto t = static_cast<std::int64_t>(i);
      auto resized = resize_with_boxes(video.frame(i), video.annotations_at(t), input_size);
      buffer.push(resized.frame);
      if (t < max_lag) continue;
      const auto cascade = flow::build_cascade(buffer, t, fc.lags, *backend);
      Sample s;
      s.stack = flow::assemble_asof(cascade, resized.frame, fc.max_displacement, norm, fc.keep_components);
      s.ground_truth = std::move(resized.annotations);
      s.video = video.name;
      out.push_back(std::move(s));
    }
  }
  return out;
}

DenseTargets build_targets(const detector::AnchorGrid& anchors, const std::vector<MovingObjectInstance>& gt,
                           const detector::BoxCoder& coder, AssignmentThresholds th) {
  const auto assigned = assign_anchors(anchors.anchors, gt, th);
  const auto n = static_cast<std::int64_t>(assigned.size());
  DenseTargets t;
  t.labels = torch::empty({n}, torch::kInt64);
  t.target_deltas = torch::zeros({n, 4}, torch::kFloat32);
  t.positive = torch::zeros({n}, torch::kBool);
  auto labels = t.labels.accessor<std::int64_t, 1>();
  auto deltas = t.target_deltas.accessor<float, 2>();
  auto pos = t.positive.accessor<bool, 1>();
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& a = assigned[static_cast<std::size_t>(i)];
    labels[i] = a.label;
    if (a.positive()) {
      pos[i] = true;
      const auto d = coder.encode(gt[static_cast<std::size_t>(a.gt_index)].box,
                                  anchors.anchors[static_cast<std::size_t>(i)]);
      for (int c = 0; c < 4; ++c) deltas[i][c] = static_cast<float>(d[static_cast<std::size_t>(c)]);
    }
  }
  return t;
}

SampleScore score_samples(const inference::Detector& detector, const std::vector<Sample>& samples,
                          double iou_threshold) {
  SampleScore out;
  std::vector<eval::VideoResults> videos;
  for (const auto& s : samples) {
    if (videos.empty() || videos.back().name != s.video) {
      videos.push_back({s.video, s.stack.size(), {}, {}});
    }
    auto dets = detector.detect(s.stack);
    for (const auto& d : dets) {
      bool matched = false;
      for (const auto& g : s.ground_truth) {
        matched = matched || (g.label == d.label && iou(g.box, d.box) >= iou_threshold);
      }
      if (!matched) out.max_false_positive_score = std::max(out.max_false_positive_score, d.score);
    }
    auto& v = videos.back();
    v.detections.insert(v.detections.end(), dets.begin(), dets.end());
    v.ground_truth.insert(v.ground_truth.end(), s.ground_truth.begin(), s.ground_truth.end());
    out.detections.insert(out.detections.end(), dets.begin(), dets.end());
  }
  out.report = eval::evaluate_videos(std::move(videos), iou_threshold);
  return out;
}

Trainer::Trainer(detector::MorNet model, TrainConfig config, torch::Device device)
    : model_(std::move(model)), config_(config), device_(device) {
  config_.validate();
  anchors_ = detector::generate_anchors(model_->options().input_size, model_->options().anchors);
  model_->to(device_);
  optimizer_ = std::make_unique<torch::optim::Adam>(model_->parameters(),
                                                    torch::optim::AdamOptions(config_.learning_rate));
}

double Trainer::learning_rate() const {
  return static_cast<torch::optim::AdamOptions&>(optimizer_->param_groups().front().options()).lr();
}

std::size_t Trainer::sample_index(std::int64_t step, std::size_t n) const {
  if (n == 0) throw Error("no training samples");
  const auto epoch = static_cast<std::uint64_t>(step) / n;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(config_.seed * 0x9E3779B97F4A7C15ULL + epoch);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
  return perm[static_cast<std::uint64_t>(step) % n];
}

LossBreakdown Trainer::compute(const Sample& sample, bool flip, torch::Tensor* total) {
  cv::Mat flow_m = sample.stack.flow_channels, frame_m = sample.stack.frame_channels;
  auto gt = sample.ground_truth;
  if (flip) {
    cv::flip(flow_m, flow_m, 1);
    cv::flip(frame_m, frame_m, 1);
    const double w = frame_m.cols;
    for (auto& g : gt) g.box = {w - g.box.x2, g.box.y1, w - g.box.x1, g.box.y2};
    if (sample.stack.flow_channels.channels() == 2 * static_cast<int>(model_->options().variant.lags.size())) {
      // Signed components: mirroring negates u.
      std::vector<cv::Mat> ch;
      cv::split(flow_m, ch);
      for (std::size_t c = 0; c < ch.size(); c += 2) ch[c] = -ch[c];
      cv::merge(ch, flow_m);
    }
  }
  const auto flow_t = detector::mat_to_tensor(flow_m).to(device_);
  const auto frame_t = detector::mat_to_tensor(frame_m).to(device_);
  const auto targets = build_targets(anchors_, gt, coder_, config_.assignment);
  const auto pred = model_->forward(flow_t, frame_t);
  const auto cls = focal_loss(pred.class_logits[0], targets.labels.to(device_), config_.focal_alpha,
                              config_.focal_gamma);
  const auto reg = smooth_l1(pred.box_deltas[0], targets.target_deltas.to(device_),
                             targets.positive.to(device_), config_.smooth_l1_beta);
  const auto sum = cls + reg;
  if (total) *total = sum;
  LossBreakdown b;
  b.classification_loss = cls.item<double>();
  b.regression_loss = reg.item<double>();
  b.total = b.classification_loss + b.regression_loss;
  return b;
}

LossBreakdown Trainer::train_step(const Sample& sample) {
  model_->train();
  bool flip = false;
  if (config_.horizontal_flip) {
    std::mt19937_64 rng(config_.seed ^ (static_cast<std::uint64_t>(step_) * 0xD1B54A32D192ED03ULL));
    flip = (rng() & 1U) != 0;
  }
  torch::Tensor total;
  LossBreakdown b;
  try {
    b = compute(sample, flip, &total);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " at step " + std::to_string(step_ + 1));
  }
  if (!std::isfinite(b.total)) {
    throw NumericError("non-finite training loss at step " + std::to_string(step_ + 1));
  }
  optimizer_->zero_grad();
  total.backward();
  optimizer_->step();
  ++step_;
  maybe_decay(b.total);
  return b;
}

void Trainer::maybe_decay(double loss) {
  if (!config_.plateau_decay) return;
  window_sum_ += loss;
  if (++window_count_ < config_.plateau_patience) return;
  const double mean = window_sum_ / static_cast<double>(window_count_);
  window_sum_ = 0.0;
  window_count_ = 0;
  if (have_window_ && mean >= best_window_) {
    for (auto& group : optimizer_->param_groups()) {
      auto& opts = static_cast<torch::optim::AdamOptions&>(group.options());
      opts.lr(opts.lr() * config_.plateau_factor);
    }
  }
  best_window_ = have_window_ ? std::min(best_window_, mean) : mean;
  have_window_ = true;
}

void Trainer::train_loop(const std::vector<Sample>& samples, const StepCallback& on_step) {
  if (samples.empty()) throw Error("no training samples");
  while (step_ < config_.max_iterations) {
    const auto& s = samples[sample_index(step_, samples.size())];
    const auto b = train_step(s);
    if (on_step) on_step(step_, b);
  }
}

void Trainer::save_checkpoint(const std::filesystem::path& path, const nlohmann::json& config,
                              const nlohmann::json& metrics) {
  detector::CheckpointMeta meta;
  meta.model = model_->options();
  meta.step = step_;
  meta.config = config.is_null() ? nlohmann::json::object() : config;
  meta.metrics = metrics.is_null() ? nlohmann::json::object() : metrics;
  meta.metrics["learning_rate"] = learning_rate();
  detector::save_checkpoint(path, *model_, meta, optimizer_.get());
}

void Trainer::resume(const std::filesystem::path& path) {
  auto loaded = detector::load_checkpoint(path);
  const auto& mine = model_->options();
  const auto& theirs = loaded.meta.model;
  if (theirs.variant.tag() != mine.variant.tag() || !(theirs.anchors == mine.anchors) ||
      !(theirs.head == mine.head) || theirs.input_size != mine.input_size) {
    throw ConfigError("checkpoint " + path.string() + " (" + theirs.variant.tag() +
                      ") does not match the configured model (" + mine.variant.tag() + ")");
  }
  {
    torch::NoGradGuard no_grad;
    auto dst = model_->named_parameters();
    for (const auto& p : loaded.model->named_parameters()) dst[p.key()].copy_(p.value());
    auto dst_buf = model_->named_buffers();
    for (const auto& b : loaded.model->named_buffers()) dst_buf[b.key()].copy_(b.value());
  }
  if (!detector::load_optimizer_state(path, *optimizer_)) {
    throw Error("checkpoint " + path.string() + " has no optimizer state to resume from");
  }
  step_ = loaded.meta.step;
}

}  // namespace mor::training
