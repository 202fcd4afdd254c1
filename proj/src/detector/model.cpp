#include "mor/detector/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mor/error.hpp"

namespace nn = torch::nn;

namespace mor::detector {
namespace {

nn::Conv2d conv(int in, int out, int k, int stride = 1) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, k).stride(stride).padding((k - 1) / 2));
}

torch::Tensor upsample_to(const torch::Tensor& x, const torch::Tensor& like) {
  return nn::functional::interpolate(
      x, nn::functional::InterpolateFuncOptions()
             .size(std::vector<int64_t>{like.size(2), like.size(3)})
             .mode(torch::kNearest));
}

void check_same_hw(const torch::Tensor& a, const torch::Tensor& b, const char* stage) {
  if (a.size(2) != b.size(2) || a.size(3) != b.size(3) || a.size(0) != b.size(0)) {
    throw ShapeError(std::string("stream features disagree in shape at ") + stage);
  }
}

}  // namespace

StageFeatures fuse_msf(const StageFeatures& motion, const std::optional<StageFeatures>& appearance) {
  if (!appearance) return motion;
  check_same_hw(motion.c3, appearance->c3, "C3");
  check_same_hw(motion.c4, appearance->c4, "C4");
  check_same_hw(motion.c5, appearance->c5, "C5");
  return {torch::cat({motion.c3, appearance->c3}, 1), torch::cat({motion.c4, appearance->c4}, 1),
          torch::cat({motion.c5, appearance->c5}, 1)};
}

// --- pyramid -------------------------------------------------------------------

PyramidImpl::PyramidImpl(std::array<int, 3> in, int ch) {
  lateral3 = register_module("lateral3", conv(in[0], ch, 1));
  lateral4 = register_module("lateral4", conv(in[1], ch, 1));
  lateral5 = register_module("lateral5", conv(in[2], ch, 1));
  smooth3 = register_module("smooth3", conv(ch, ch, 3));
  smooth4 = register_module("smooth4", conv(ch, ch, 3));
  smooth5 = register_module("smooth5", conv(ch, ch, 3));
  p6 = register_module("p6", conv(in[2], ch, 3, 2));
  p7 = register_module("p7", conv(ch, ch, 3, 2));
}

FeaturePyramid PyramidImpl::forward(const StageFeatures& s) {
  auto m5 = lateral5(s.c5);
  auto m4 = lateral4(s.c4) + upsample_to(m5, s.c4);
  auto m3 = lateral3(s.c3) + upsample_to(m4, s.c3);
  FeaturePyramid out;
  out.levels[0] = smooth3(m3);
  out.levels[1] = smooth4(m4);
  out.levels[2] = smooth5(m5);
  out.levels[3] = p6(s.c5);
  out.levels[4] = p7(torch::relu(out.levels[3]));
  return out;
}

// --- heads -----------------------------------------------------------------------

HeadImpl::HeadImpl(int in_channels, int width, int depth, int anchors, int outputs, double bias_init)
    : anchors_(anchors), outputs_(outputs) {
  tower = register_module("tower", nn::Sequential());
  int ch = in_channels;
  for (int i = 0; i < depth; ++i) {
    auto c = conv(ch, width, 3);
    nn::init::normal_(c->weight, 0.0, 0.01);
    nn::init::zeros_(c->bias);
    tower->push_back(c);
    tower->push_back(nn::Functional([](torch::Tensor t) { return torch::relu(t); }));
    ch = width;
  }
  project = register_module("project", conv(ch, anchors * outputs, 3));
  nn::init::normal_(project->weight, 0.0, 0.01);
  nn::init::constant_(project->bias, bias_init);
}

torch::Tensor HeadImpl::forward(torch::Tensor x) {
  auto y = project(tower->forward(x));  // [B, A*O, H, W]
  const auto b = y.size(0);
  return y.permute({0, 2, 3, 1}).reshape({b, -1, outputs_});
}

// --- detector --------------------------------------------------------------------

MorNetImpl::MorNetImpl(ModelOptions options) : options_(std::move(options)) {
  const auto& v = options_.variant;
  validate_variant(v);
  motion_ = register_module("motion", make_backbone(v.backbone.family, v.motion_input_channels()));
  auto channels = motion_->stage_channels();
  if (v.dual_stream) {
    appearance_ = register_module("appearance", make_backbone(v.backbone.family, 3));
    for (int i = 0; i < 3; ++i) channels[i] += appearance_->stage_channels()[i];
  }
  const auto& h = options_.head;
  pyramid_ = register_module("pyramid", Pyramid(channels, h.pyramid_channels));
  const int a = options_.anchors.per_location();
  const double prior = std::clamp(h.prior_probability, 1e-6, 1.0 - 1e-6);
  classifier_ = register_module(
      "classifier", Head(h.pyramid_channels, h.head_channels, h.head_convs, a, h.num_classes,
                         -std::log((1.0 - prior) / prior)));
  regressor_ = register_module(
      "regressor", Head(h.pyramid_channels, h.head_channels, h.head_convs, a, 4, 0.0));
}

FeaturePyramid MorNetImpl::pyramid_features(torch::Tensor flow, torch::Tensor frame,
                                            torch::Tensor* stem_out) {
  const auto& v = options_.variant;
  if (flow.dim() != 4 || frame.dim() != 4) throw ShapeError("model inputs must be [B, C, H, W]");
  if (flow.size(1) != v.flow_channels()) {
    throw ShapeError("flow input has " + std::to_string(flow.size(1)) + " channels, model expects " +
                     std::to_string(v.flow_channels()));
  }
  if (frame.size(1) != 3) throw ShapeError("frame input must have 3 channels");
  if (flow.size(2) != frame.size(2) || flow.size(3) != frame.size(3)) {
    throw ShapeError("flow and frame inputs differ in spatial size");
  }
  auto motion_in = torch::cat({flow, frame}, 1);
  if (stem_out) *stem_out = motion_->stem(motion_in);
  auto motion = motion_->forward(motion_in);
  std::optional<StageFeatures> appearance;
  if (appearance_) appearance = appearance_->forward(frame);
  return pyramid_->forward(fuse_msf(motion, appearance));
}

RawPredictions MorNetImpl::forward(torch::Tensor flow, torch::Tensor frame) {
  const auto pyramid = pyramid_features(flow, frame, nullptr);
  std::vector<torch::Tensor> logits, deltas;
  for (const auto& level : pyramid.levels) {
    logits.push_back(classifier_->forward(level));
    deltas.push_back(regressor_->forward(level));
  }
  return {torch::cat(logits, 1), torch::cat(deltas, 1)};
}

FeatureTaps MorNetImpl::features(torch::Tensor flow, torch::Tensor frame) {
  FeatureTaps taps;
  taps.pyramid = pyramid_features(flow, frame, &taps.stem);
  return taps;
}

std::int64_t MorNetImpl::parameter_count() const { return count_parameters(*this); }

MorNet build_model(const ModelOptions& options) {
  MorNet model(options);
  const auto& bb = options.variant.backbone;
  if (bb.pretrained) {
    load_pretrained_backbone(model->motion_backbone(), bb.family, bb.weights);
    if (auto* app = model->appearance_backbone()) load_pretrained_backbone(*app, bb.family, bb.weights);
  }
  return model;
}

std::int64_t count_parameters(const torch::nn::Module& module) {
  std::int64_t n = 0;
  for (const auto& p : module.parameters()) {
    if (p.requires_grad()) n += p.numel();
  }
  return n;
}

std::vector<std::string> layer_signature(const torch::nn::Module& module) {
  std::vector<std::string> sig;
  for (const auto& m : module.modules(/*include_self=*/true)) {
    if (!m->children().empty()) continue;
    std::ostringstream os;
    os << m->name() << '[';
    for (const auto& p : m->named_parameters(/*recurse=*/false)) {
      os << p.key() << ':' << p.value().sizes() << ';';
    }
    os << ']';
    sig.push_back(os.str());
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace mor::detector
