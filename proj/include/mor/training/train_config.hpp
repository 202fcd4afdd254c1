#pragma once

#include <cstdint>
#include <string>

#include "mor/training/assign.hpp"

namespace mor::training {

struct TrainConfig {
  double learning_rate{1e-5};
  int batch_size{1};
  std::int64_t max_iterations{250000};
  double focal_alpha{0.25};
  double focal_gamma{2.0};
  double smooth_l1_beta{1.0};
  AssignmentThresholds assignment;
  std::int64_t checkpoint_every{5000};
  std::int64_t log_every{1};
  std::uint64_t seed{0};
  bool deterministic{false};
  bool horizontal_flip{false};
  /// Multiply the learning rate by `plateau_factor` when the mean loss over a
  /// window of `plateau_patience` steps fails to improve on the previous window.
  bool plateau_decay{false};
  double plateau_factor{0.5};
  std::int64_t plateau_patience{1000};

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

}  // namespace mor::training
