#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "mor/core/types.hpp"

namespace mor::synth {

enum class SpriteShape { Rectangle, Ellipse };

struct Trajectory {
  enum class Kind { Static, Linear, StopAndGo };
  Kind kind{Kind::Static};
  /// Scene-relative velocity in px/frame (Linear, StopAndGo).
  double vx{0.0};
  double vy{0.0};
  /// StopAndGo period: `go_frames` of motion followed by `stop_frames` at rest.
  int go_frames{5};
  int stop_frames{5};

  [[nodiscard]] static Trajectory still() { return {}; }
  [[nodiscard]] static Trajectory linear(double vx, double vy) { return {Kind::Linear, vx, vy}; }
  [[nodiscard]] static Trajectory stop_and_go(double vx, double vy, int go, int stop) {
    return {Kind::StopAndGo, vx, vy, go, stop};
  }

  /// Scene displacement accumulated by frame t.
  [[nodiscard]] cv::Point2d displacement(int t) const;
  /// Scene speed (px/frame) over the step that produced frame t (frame 0 uses the first step).
  [[nodiscard]] double speed_at(int t) const;
};

struct SpriteSpec {
  SpriteShape shape{SpriteShape::Rectangle};
  int width{24};
  int height{14};
  ClassLabel label{ClassLabel::Car};
  /// Top-left corner at frame 0, in image coordinates.
  cv::Point2d origin;
  Trajectory trajectory;
  /// Sprites sharing a texture seed (and size, shape, class) look identical.
  std::uint64_t texture_seed{1};
};

struct SynthSceneSpec {
  std::string name{"scene"};
  cv::Size canvas{256, 256};
  std::uint64_t background_seed{7};
  std::vector<SpriteSpec> sprites;
  /// Image-space displacement of the static background per frame.
  cv::Point2d camera_pan{0.0, 0.0};
  int n_frames{25};
  double fps{kDefaultFps};
  /// Minimum scene speed (px/frame) for a sprite to count as a moving object.
  double motion_threshold{0.5};
};

/// Image-space top-left of sprite `s` at frame `t` (scene motion plus camera pan, rounded).
[[nodiscard]] cv::Point sprite_position(const SynthSceneSpec& spec, const SpriteSpec& s, int t);

/// Throws ConfigError when a sprite leaves the 1-px inner margin of the canvas
/// at any frame, or the spec is otherwise malformed.
void validate_spec(const SynthSceneSpec& spec);

struct SynthVideo {
  /// Frames in memory plus movers-only annotations.
  VideoSequence sequence;
  /// For every frame, the sprite indices that count as moving objects.
  std::vector<std::vector<int>> movers;
};

/// Renders the scene. Identical specs give bit-identical frames and labels.
[[nodiscard]] SynthVideo generate_video(const SynthSceneSpec& spec);

/// S1 single mover, S2 mover + identical static distractor, S3 twenty movers,
/// S4 camera pan with movers and statics, S5 8-px and 80-px movers.
[[nodiscard]] std::vector<SynthSceneSpec> standard_suites(cv::Size canvas = {256, 256},
                                                          int n_frames = 25);
/// One suite by name ("s1".."s5"); throws ConfigError otherwise.
[[nodiscard]] SynthSceneSpec standard_suite(const std::string& name, cv::Size canvas = {256, 256},
                                            int n_frames = 25);

}  // namespace mor::synth
