#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "mor/detector/anchors.hpp"
#include "mor/detector/backbones.hpp"
#include "mor/detector/variant.hpp"

namespace mor::detector {

/// P3..P7, all with the same channel width.
struct FeaturePyramid {
  std::array<torch::Tensor, kNumLevels> levels;
};

/// Dense per-anchor outputs, anchors ordered as in AnchorGrid.
struct RawPredictions {
  torch::Tensor class_logits;  ///< [B, N, K], pre-sigmoid
  torch::Tensor box_deltas;    ///< [B, N, 4]
};

/// Motion-salient features: the two streams concatenated channel-wise per stage.
/// With no appearance stream the motion features pass through unchanged.
/// Throws ShapeError when spatial shapes differ at any stage.
[[nodiscard]] StageFeatures fuse_msf(const StageFeatures& motion,
                                     const std::optional<StageFeatures>& appearance);

/// Top-down pyramid: lateral 1x1 projections with nearest upsampling and addition
/// for P3..P5, a 3x3 smoothing convolution on each, P6 by a stride-2 3x3 on C5 and
/// P7 by a stride-2 3x3 on ReLU(P6).
class PyramidImpl : public torch::nn::Module {
 public:
  PyramidImpl(std::array<int, 3> in_channels, int channels);
  FeaturePyramid forward(const StageFeatures& stages);

 private:
  torch::nn::Conv2d lateral3{nullptr}, lateral4{nullptr}, lateral5{nullptr};
  torch::nn::Conv2d smooth3{nullptr}, smooth4{nullptr}, smooth5{nullptr};
  torch::nn::Conv2d p6{nullptr}, p7{nullptr};
};
TORCH_MODULE(Pyramid);

/// Shared subnet applied to every pyramid level: `depth` 3x3 conv + ReLU, then a
/// 3x3 projection to `anchors * outputs` channels.
class HeadImpl : public torch::nn::Module {
 public:
  HeadImpl(int in_channels, int width, int depth, int anchors, int outputs, double bias_init);
  /// Returns [B, H * W * anchors, outputs] for one level.
  torch::Tensor forward(torch::Tensor x);

 private:
  int anchors_;
  int outputs_;
  torch::nn::Sequential tower{nullptr};
  torch::nn::Conv2d project{nullptr};
};
TORCH_MODULE(Head);

struct ModelOptions {
  ModelVariant variant;
  AnchorConfig anchors;
  HeadConfig head;
  cv::Size input_size{608, 608};
};

/// Intermediate activations used for visualization.
struct FeatureTaps {
  torch::Tensor stem;  ///< first convolution of the motion stream
  FeaturePyramid pyramid;
};

/// The detector: motion stream (flow + frame), optional appearance stream, fusion,
/// pyramid and dense heads.
class MorNetImpl : public torch::nn::Module {
 public:
  explicit MorNetImpl(ModelOptions options);

  /// `flow`: [B, C_flow, H, W]; `frame`: [B, 3, H, W].
  RawPredictions forward(torch::Tensor flow, torch::Tensor frame);
  FeatureTaps features(torch::Tensor flow, torch::Tensor frame);

  [[nodiscard]] const ModelOptions& options() const noexcept { return options_; }
  [[nodiscard]] std::int64_t parameter_count() const;
  [[nodiscard]] BackboneImpl& motion_backbone() { return *motion_; }
  [[nodiscard]] BackboneImpl* appearance_backbone() { return appearance_.get(); }

 private:
  FeaturePyramid pyramid_features(torch::Tensor flow, torch::Tensor frame, torch::Tensor* stem_out);

  ModelOptions options_;
  Backbone motion_{nullptr};
  Backbone appearance_{nullptr};
  Pyramid pyramid_{nullptr};
  Head classifier_{nullptr};
  Head regressor_{nullptr};
};
TORCH_MODULE(MorNet);

/// Builds a model. With `variant.backbone.pretrained` the backbone weights are
/// loaded from `variant.backbone.weights`; a missing file is an error.
[[nodiscard]] MorNet build_model(const ModelOptions& options);

[[nodiscard]] std::int64_t count_parameters(const torch::nn::Module& module);

/// Sorted multiset of leaf layers, each rendered as `<type>[<param shapes>]`.
[[nodiscard]] std::vector<std::string> layer_signature(const torch::nn::Module& module);

}  // namespace mor::detector
