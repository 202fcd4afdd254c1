#include "mor/training/train_config.hpp"

#include "mor/error.hpp"

namespace mor::training {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ConfigError("train.learning_rate must be >= 0");
  if (batch_size != 1) throw ConfigError("train.batch_size must be 1");
  if (max_iterations < 0) throw ConfigError("train.max_iterations must be >= 0");
  if (!(focal_gamma >= 0.0)) throw ConfigError("train.focal_gamma must be >= 0");
  if (focal_alpha > 1.0) throw ConfigError("train.focal_alpha must be <= 1 (negative disables weighting)");
  if (!(smooth_l1_beta > 0.0)) throw ConfigError("train.smooth_l1_beta must be > 0");
  if (!(0.0 <= assignment.neg_iou && assignment.neg_iou <= assignment.pos_iou && assignment.pos_iou <= 1.0)) {
    throw ConfigError("train thresholds need 0 <= neg_iou <= pos_iou <= 1");
  }
  if (checkpoint_every < 1 || log_every < 1) throw ConfigError("train cadences must be >= 1");
  if (plateau_decay && (!(plateau_factor > 0.0 && plateau_factor < 1.0) || plateau_patience < 1)) {
    throw ConfigError("train plateau decay needs factor in (0, 1) and patience >= 1");
  }
}

}  // namespace mor::training
