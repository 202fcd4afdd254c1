#include "mor/detector/backbones.hpp"

#include <filesystem>

#include "mor/error.hpp"

namespace nn = torch::nn;

namespace mor::detector {
namespace {

nn::Conv2d make_conv(int in, int out, int k, int stride = 1, int pad = 0, int groups = 1) {
  return nn::Conv2d(
      nn::Conv2dOptions(in, out, k).stride(stride).padding(pad).groups(groups).bias(false));
}

nn::BatchNorm2d bn(int ch) { return nn::BatchNorm2d(nn::BatchNorm2dOptions(ch)); }


void init_trunk(nn::Module& m) {
  for (auto& mod : m.modules(/*include_self=*/false)) {
    if (auto* c = mod->as<nn::Conv2d>()) {
      nn::init::kaiming_normal_(c->weight, 0.0, torch::kFanOut, torch::kReLU);
    } else if (auto* b = mod->as<nn::BatchNorm2d>()) {
      nn::init::ones_(b->weight);
      nn::init::zeros_(b->bias);
    }
  }
}

}  // namespace

// --- ResNet-50 ---------------------------------------------------------------

BottleneckImpl::BottleneckImpl(int in_planes, int planes, int stride) {
  const int out = planes * kExpansion;
  conv1 = register_module("conv1", make_conv(in_planes, planes, 1));
  bn1 = register_module("bn1", bn(planes));
  conv2 = register_module("conv2", make_conv(planes, planes, 3, stride, 1));
  bn2 = register_module("bn2", bn(planes));
  conv3 = register_module("conv3", make_conv(planes, out, 1));
  bn3 = register_module("bn3", bn(out));
  if (stride != 1 || in_planes != out) {
    downsample = register_module("downsample", nn::Sequential(make_conv(in_planes, out, 1, stride), bn(out)));
  }
}

torch::Tensor BottleneckImpl::forward(torch::Tensor x) {
  auto y = torch::relu(bn1(conv1(x)));
  y = torch::relu(bn2(conv2(y)));
  y = bn3(conv3(y));
  auto identity = downsample ? downsample->forward(x) : x;
  return torch::relu(y + identity);
}

ResNet50Impl::ResNet50Impl(int in_channels) : in_channels_(in_channels) {
  conv1 = register_module("conv1", make_conv(in_channels, 64, 7, 2, 3));
  bn1 = register_module("bn1", bn(64));
  int in_planes = 64;
  layer1 = register_module("layer1", make_layer(in_planes, 64, 3, 1));
  layer2 = register_module("layer2", make_layer(in_planes, 128, 4, 2));
  layer3 = register_module("layer3", make_layer(in_planes, 256, 6, 2));
  layer4 = register_module("layer4", make_layer(in_planes, 512, 3, 2));
  init_trunk(*this);
}

nn::Sequential ResNet50Impl::make_layer(int& in_planes, int planes, int blocks, int stride) {
  nn::Sequential seq;
  seq->push_back(Bottleneck(in_planes, planes, stride));
  in_planes = planes * BottleneckImpl::kExpansion;
  for (int i = 1; i < blocks; ++i) seq->push_back(Bottleneck(in_planes, planes, 1));
  return seq;
}

torch::Tensor ResNet50Impl::stem(torch::Tensor x) { return torch::relu(bn1(conv1(x))); }

StageFeatures ResNet50Impl::forward(torch::Tensor x) {
  x = torch::max_pool2d(stem(x), 3, 2, 1);
  x = layer1->forward(x);
  StageFeatures f;
  f.c3 = layer2->forward(x);
  f.c4 = layer3->forward(f.c3);
  f.c5 = layer4->forward(f.c4);
  return f;
}

// --- MobileNetV2 -------------------------------------------------------------

ConvBnRelu6Impl::ConvBnRelu6Impl(int in, int out, int k, int stride, int groups) {
  conv = register_module("conv", make_conv(in, out, k, stride, (k - 1) / 2, groups));
  norm = register_module("norm", bn(out));
}

torch::Tensor ConvBnRelu6Impl::forward(torch::Tensor x) {
  return torch::clamp(norm(conv(x)), 0.0, 6.0);
}

InvertedResidualImpl::InvertedResidualImpl(int in_ch, int out_ch, int stride, int expand_ratio)
    : use_residual_(stride == 1 && in_ch == out_ch) {
  const int hidden = in_ch * expand_ratio;
  nn::Sequential seq;
  if (expand_ratio != 1) seq->push_back(ConvBnRelu6(in_ch, hidden, 1, 1));
  seq->push_back(ConvBnRelu6(hidden, hidden, 3, stride, hidden));
  seq->push_back(make_conv(hidden, out_ch, 1));
  seq->push_back(bn(out_ch));
  body = register_module("body", seq);
}

torch::Tensor InvertedResidualImpl::forward(torch::Tensor x) {
  auto y = body->forward(x);
  return use_residual_ ? x + y : y;
}

MobileNetV2Impl::MobileNetV2Impl(int in_channels) : in_channels_(in_channels) {
  struct Block {
    int t, c, n, s;
  };
  // Expansion, channels, repeats, first stride.
  constexpr Block kBlocks[] = {{1, 16, 1, 1}, {6, 24, 2, 2},  {6, 32, 3, 2}, {6, 64, 4, 2},
                               {6, 96, 3, 1}, {6, 160, 3, 2}, {6, 320, 1, 1}};
  nn::Sequential s3, s4, s5;
  stem_ = ConvBnRelu6(in_channels, 32, 3, 2);
  s3->push_back(stem_);
  int in = 32;
  for (int b = 0; b < 7; ++b) {
    auto& target = b <= 2 ? s3 : (b <= 4 ? s4 : s5);
    for (int i = 0; i < kBlocks[b].n; ++i) {
      target->push_back(InvertedResidual(in, kBlocks[b].c, i == 0 ? kBlocks[b].s : 1, kBlocks[b].t));
      in = kBlocks[b].c;
    }
  }
  s5->push_back(ConvBnRelu6(320, 1280, 1, 1));
  stage3 = register_module("stage3", s3);
  stage4 = register_module("stage4", s4);
  stage5 = register_module("stage5", s5);
  init_trunk(*this);
}

torch::Tensor MobileNetV2Impl::stem(torch::Tensor x) { return stem_->forward(x); }

torch::Tensor& MobileNetV2Impl::stem_weight() { return stem_->conv->weight; }

StageFeatures MobileNetV2Impl::forward(torch::Tensor x) {
  StageFeatures f;
  f.c3 = stage3->forward(x);
  f.c4 = stage4->forward(f.c3);
  f.c5 = stage5->forward(f.c4);
  return f;
}

// --- factory and weights -------------------------------------------------------

Backbone make_backbone(BackboneFamily family, int in_channels) {
  if (in_channels <= 0) throw ConfigError("backbone input channels must be positive");
  if (family == BackboneFamily::ResNet50) return std::make_shared<ResNet50Impl>(in_channels);
  return std::make_shared<MobileNetV2Impl>(in_channels);
}

void save_backbone_weights(BackboneImpl& backbone, const std::filesystem::path& path) {
  torch::serialize::OutputArchive archive;
  backbone.save(archive);
  archive.save_to(path.string());
}

torch::Tensor adapt_stem_weight(const torch::Tensor& rgb_weight, int new_channels) {
  if (rgb_weight.dim() != 4) throw ShapeError("stem weight must be 4-D");
  const auto in = rgb_weight.size(1);
  return rgb_weight.mean(1, /*keepdim=*/true).repeat({1, new_channels, 1, 1}) *
         (static_cast<double>(in) / new_channels);
}

void load_pretrained_backbone(BackboneImpl& target, BackboneFamily family,
                              const std::filesystem::path& path) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw Error("pretrained backbone weights not found: '" + path.string() +
                "' (set model.backbone.weights or disable model.backbone.pretrained)");
  }
  auto source = make_backbone(family, 3);
  try {
    torch::serialize::InputArchive archive;
    archive.load_from(path.string());
    source->load(archive);
  } catch (const c10::Error& e) {
    throw Error("cannot load backbone weights from " + path.string() + ": " + e.what_without_backtrace());
  }
  torch::NoGradGuard no_grad;
  auto src_params = source->named_parameters();
  auto src_buffers = source->named_buffers();
  const auto stem_ptr = target.stem_weight().data_ptr();
  for (auto& p : target.named_parameters()) {
    const auto* src = src_params.find(p.key());
    if (!src) throw Error("backbone weights lack parameter " + p.key());
    if (p.value().data_ptr() == stem_ptr && p.value().size(1) != src->size(1)) {
      p.value().copy_(adapt_stem_weight(*src, static_cast<int>(p.value().size(1))));
    } else {
      p.value().copy_(*src);
    }
  }
  for (auto& b : target.named_buffers()) {
    if (const auto* src = src_buffers.find(b.key())) b.value().copy_(*src);
  }
}

}  // namespace mor::detector
