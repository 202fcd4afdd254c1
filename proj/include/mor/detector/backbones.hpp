#pragma once

#include <array>
#include <filesystem>

#include <torch/torch.h>

#include "mor/detector/variant.hpp"

namespace mor::detector {

/// Stage outputs at strides 8, 16 and 32.
struct StageFeatures {
  torch::Tensor c3;
  torch::Tensor c4;
  torch::Tensor c5;
};

/// Convolutional trunk exposing its stride-8/16/32 stages.
class BackboneImpl : public torch::nn::Module {
 public:
  virtual StageFeatures forward(torch::Tensor x) = 0;
  /// Output of the first convolution (after its normalization and activation).
  virtual torch::Tensor stem(torch::Tensor x) = 0;
  /// Weight of the first convolution, [out, in, k, k].
  virtual torch::Tensor& stem_weight() = 0;
  [[nodiscard]] virtual std::array<int, 3> stage_channels() const = 0;
  [[nodiscard]] virtual int in_channels() const = 0;
};

using Backbone = std::shared_ptr<BackboneImpl>;

// --- ResNet-50 ------------------------------------------------------------

class BottleneckImpl : public torch::nn::Module {
 public:
  static constexpr int kExpansion = 4;
  BottleneckImpl(int in_planes, int planes, int stride);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::Conv2d conv1{nullptr}, conv2{nullptr}, conv3{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr}, bn2{nullptr}, bn3{nullptr};
  torch::nn::Sequential downsample{nullptr};
};
TORCH_MODULE(Bottleneck);

/// ResNet-50 without the classifier. Stride lives on the 3x3 convolution.
class ResNet50Impl : public BackboneImpl {
 public:
  explicit ResNet50Impl(int in_channels = 3);
  StageFeatures forward(torch::Tensor x) override;
  torch::Tensor stem(torch::Tensor x) override;
  torch::Tensor& stem_weight() override { return conv1->weight; }
  [[nodiscard]] std::array<int, 3> stage_channels() const override { return {512, 1024, 2048}; }
  [[nodiscard]] int in_channels() const override { return in_channels_; }

 private:
  torch::nn::Sequential make_layer(int& in_planes, int planes, int blocks, int stride);

  int in_channels_;
  torch::nn::Conv2d conv1{nullptr};
  torch::nn::BatchNorm2d bn1{nullptr};
  torch::nn::Sequential layer1{nullptr}, layer2{nullptr}, layer3{nullptr}, layer4{nullptr};
};

// --- MobileNetV2 ------------------------------------------------------------

/// Convolution, batch norm, ReLU6.
class ConvBnRelu6Impl : public torch::nn::Module {
 public:
  ConvBnRelu6Impl(int in, int out, int k, int stride, int groups = 1);
  torch::Tensor forward(torch::Tensor x);

  torch::nn::Conv2d conv{nullptr};
  torch::nn::BatchNorm2d norm{nullptr};
};
TORCH_MODULE(ConvBnRelu6);

class InvertedResidualImpl : public torch::nn::Module {
 public:
  InvertedResidualImpl(int in_ch, int out_ch, int stride, int expand_ratio);
  torch::Tensor forward(torch::Tensor x);

 private:
  bool use_residual_;
  torch::nn::Sequential body{nullptr};
};
TORCH_MODULE(InvertedResidual);

/// MobileNetV2 (width 1.0) feature extractor including the final 1x1 to 1280 channels.
/// Taps: C3 = 32 ch (stride 8), C4 = 96 ch (stride 16), C5 = 1280 ch (stride 32).
class MobileNetV2Impl : public BackboneImpl {
 public:
  explicit MobileNetV2Impl(int in_channels = 3);
  StageFeatures forward(torch::Tensor x) override;
  torch::Tensor stem(torch::Tensor x) override;
  torch::Tensor& stem_weight() override;
  [[nodiscard]] std::array<int, 3> stage_channels() const override { return {32, 96, 1280}; }
  [[nodiscard]] int in_channels() const override { return in_channels_; }

 private:
  int in_channels_;
  torch::nn::Sequential stage3{nullptr}, stage4{nullptr}, stage5{nullptr};
  ConvBnRelu6 stem_{nullptr};
};

[[nodiscard]] Backbone make_backbone(BackboneFamily family, int in_channels);

/// Writes backbone weights in the archive format read by load_pretrained_backbone.
void save_backbone_weights(BackboneImpl& backbone, const std::filesystem::path& path);

/// Loads 3-channel pretrained weights into `target`. When `target` takes a different
/// channel count, the first-layer kernels are averaged over the input axis,
/// replicated to the new count and scaled by 3 / new_count.
/// Throws Error when the file is missing or does not match the architecture.
void load_pretrained_backbone(BackboneImpl& target, BackboneFamily family,
                              const std::filesystem::path& path);

/// Pure function behind the first-layer adaptation, exposed for testing.
[[nodiscard]] torch::Tensor adapt_stem_weight(const torch::Tensor& rgb_weight, int new_channels);

}  // namespace mor::detector
