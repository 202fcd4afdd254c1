#pragma once

#include <cstdint>

#include <opencv2/core.hpp>
#include <torch/torch.h>

namespace mor::detector {

/// Device named by the MOR_DEVICE environment variable ("cpu" default, "cuda", "cuda:N").
[[nodiscard]] torch::Device device_from_env();

/// Seeds torch, pins one intra-op thread and requests deterministic kernels.
void enable_determinism(std::uint64_t seed);

/// [1, C, H, W] float tensor from an H x W x C CV_32F matrix.
[[nodiscard]] torch::Tensor mat_to_tensor(const cv::Mat& hwc);

}  // namespace mor::detector
