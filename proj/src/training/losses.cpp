#include "mor/training/losses.hpp"

#include "mor/error.hpp"
#include "mor/training/assign.hpp"

namespace mor::training {

torch::Tensor focal_loss(const torch::Tensor& logits, const torch::Tensor& targets, double alpha,
                         double gamma) {
  if (logits.dim() != 2 || targets.dim() != 1 || logits.size(0) != targets.size(0)) {
    throw ShapeError("focal_loss expects logits [N, K] and targets [N]");
  }
  if (!torch::isfinite(logits).all().item<bool>()) throw NumericError("non-finite class logits");

  const auto valid = targets.ne(AnchorTarget::kIgnore);
  const auto positive = targets.ge(0);
  const auto num_pos = std::max<std::int64_t>(1, positive.sum().item<std::int64_t>());

  auto y = torch::zeros_like(logits);
  if (positive.any().item<bool>()) {
    const auto rows = positive.nonzero().squeeze(1);
    y.index_put_({rows, targets.index({rows})}, 1.0);
  }
  const auto ce = torch::binary_cross_entropy_with_logits(logits, y, {}, {}, at::Reduction::None);
  const auto p = torch::sigmoid(logits);
  const auto p_t = p * y + (1 - p) * (1 - y);
  auto loss = ce;
  if (gamma != 0.0) loss = loss * torch::pow(1 - p_t, gamma);
  if (alpha >= 0.0) loss = loss * (alpha * y + (1 - alpha) * (1 - y));
  loss = loss * valid.unsqueeze(1).to(loss.scalar_type());
  return loss.sum() / static_cast<double>(num_pos);
}

torch::Tensor smooth_l1(const torch::Tensor& deltas, const torch::Tensor& target_deltas,
                        const torch::Tensor& positive, double beta) {
  if (deltas.sizes() != target_deltas.sizes() || deltas.dim() != 2 || positive.dim() != 1 ||
      positive.size(0) != deltas.size(0)) {
    throw ShapeError("smooth_l1 expects deltas and targets [N, 4] and a mask [N]");
  }
  if (beta <= 0.0) throw ConfigError("smooth_l1 beta must be positive");
  const auto num_pos = std::max<std::int64_t>(1, positive.sum().item<std::int64_t>());
  const auto x = (deltas - target_deltas).abs();
  const auto per = torch::where(x < beta, 0.5 * x * x / beta, x - 0.5 * beta);
  const auto mask = positive.unsqueeze(1).to(per.scalar_type());
  return (per * mask).sum() / static_cast<double>(num_pos);
}

}  // namespace mor::training
