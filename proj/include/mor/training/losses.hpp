#pragma once

#include <torch/torch.h>

namespace mor::training {

/// Sigmoid focal loss FL(p_t) = -alpha_t (1 - p_t)^gamma log(p_t).
///
/// `logits` is [N, K]; `targets` is [N] int64 holding a class id for positives,
/// AnchorTarget::kNegative or AnchorTarget::kIgnore. Every class column of a
/// non-ignored anchor contributes one binary term. The sum is divided by the
/// number of positive anchors (at least 1). A negative `alpha` disables the
/// class-balance weight (alpha_t = 1). Throws NumericError on non-finite logits.
[[nodiscard]] torch::Tensor focal_loss(const torch::Tensor& logits, const torch::Tensor& targets,
                                       double alpha = 0.25, double gamma = 2.0);

/// Smooth-L1 over positive anchors: 0.5 x^2 / beta when |x| < beta, else |x| - 0.5 beta,
/// summed over the 4 coordinates and divided by the number of positives (at least 1).
/// `positive` is an [N] bool mask.
[[nodiscard]] torch::Tensor smooth_l1(const torch::Tensor& deltas, const torch::Tensor& target_deltas,
                                      const torch::Tensor& positive, double beta = 1.0);

}  // namespace mor::training
