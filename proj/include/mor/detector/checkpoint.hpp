#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>
#include <torch/torch.h>

#include "mor/detector/model.hpp"

namespace mor::detector {

inline constexpr int kCheckpointFormatVersion = 1;

/// Everything in a checkpoint besides the tensors.
struct CheckpointMeta {
  int format_version{kCheckpointFormatVersion};
  ModelOptions model;
  std::int64_t step{0};
  /// Full run configuration snapshot, for provenance.
  nlohmann::json config = nlohmann::json::object();
  /// Last logged metrics (losses, evaluation results).
  nlohmann::json metrics = nlohmann::json::object();
};

/// Writes model weights, buffers, metadata and (optionally) optimizer state.
void save_checkpoint(const std::filesystem::path& path, MorNetImpl& model, const CheckpointMeta& meta,
                     torch::optim::Optimizer* optimizer = nullptr);

struct LoadedCheckpoint {
  MorNet model{nullptr};
  CheckpointMeta meta;
};

/// Rebuilds the model described by the checkpoint and loads its weights.
/// Pretrained backbone loading is skipped: the checkpoint already holds all weights.
[[nodiscard]] LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

[[nodiscard]] CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path);

/// Restores optimizer state; returns false when the checkpoint carries none.
bool load_optimizer_state(const std::filesystem::path& path, torch::optim::Optimizer& optimizer);

}  // namespace mor::detector
