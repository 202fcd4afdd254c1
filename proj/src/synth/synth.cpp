#include "mor/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <opencv2/imgproc.hpp>

#include "mor/error.hpp"

namespace mor::synth {
namespace {

/// Uniform noise in [0, 1) built from raw engine output so it is identical
/// across standard library implementations.
cv::Mat uniform_noise(cv::Size size, std::mt19937_64& rng) {
  cv::Mat m(size, CV_32F);
  for (int y = 0; y < size.height; ++y) {
    auto* row = m.ptr<float>(y);
    for (int x = 0; x < size.width; ++x) {
      row[x] = static_cast<float>(static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
  }
  return m;
}

cv::Mat blurred(const cv::Mat& m, double sigma) {
  cv::Mat out;
  cv::GaussianBlur(m, out, cv::Size(), sigma, sigma, cv::BORDER_REFLECT);
  return out;
}

cv::Mat stretch(const cv::Mat& m, double lo, double hi) {
  double mn = 0.0, mx = 0.0;
  cv::minMaxLoc(m, &mn, &mx);
  cv::Mat out;
  const double scale = mx > mn ? (hi - lo) / (mx - mn) : 0.0;
  m.convertTo(out, CV_32F, scale, lo - mn * scale);
  return out;
}

/// Terrain-like texture: several octaves of filtered noise, per-channel tints.
cv::Mat background_texture(cv::Size size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  cv::Mat base = 0.5f * blurred(uniform_noise(size, rng), 1.0) +
                 0.3f * blurred(uniform_noise(size, rng), 3.0) * 4.0f +
                 0.2f * blurred(uniform_noise(size, rng), 8.0) * 12.0f;
  base = stretch(base, 50.0, 200.0);
  const cv::Mat tint = stretch(blurred(uniform_noise(size, rng), 12.0), -20.0, 20.0);
  std::vector<cv::Mat> ch{base + 0.5f * tint, base - 0.3f * tint, base - tint};
  cv::Mat out;
  cv::merge(ch, out);
  out.convertTo(out, CV_8UC3);
  return out;
}

/// Vehicle-like patch: saturated body color with fine grain, a dark windscreen band
/// and light roof stripes for heavy vehicles.
cv::Mat sprite_texture(const SpriteSpec& s) {
  std::mt19937_64 rng(s.texture_seed * 0x9E3779B97F4A7C15ULL + 17);
  const cv::Size size(s.width, s.height);
  const cv::Mat grain = stretch(blurred(uniform_noise(size, rng), 0.7), -35.0, 35.0);
  const double hue_pick = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  cv::Scalar body = s.label == ClassLabel::Car ? cv::Scalar(40 + 60 * hue_pick, 30, 210)
                                               : cv::Scalar(30, 200 + 40 * hue_pick, 230);
  std::vector<cv::Mat> ch;
  for (int c = 0; c < 3; ++c) ch.push_back(grain + static_cast<float>(body[c]));
  cv::Mat patch;
  cv::merge(ch, patch);
  const bool horizontal = s.width >= s.height;
  const int band = std::max(1, (horizontal ? s.width : s.height) / 6);
  const int at = (horizontal ? s.width : s.height) * 2 / 3;
  const cv::Rect windscreen = horizontal ? cv::Rect(at, 0, band, s.height) : cv::Rect(0, at, s.width, band);
  patch(windscreen & cv::Rect(0, 0, s.width, s.height)) *= 0.25;
  if (s.label == ClassLabel::HeavyVehicle) {
    for (int k = 1; k < 4; ++k) {
      const int pos = (horizontal ? s.height : s.width) * k / 4;
      const cv::Rect stripe = horizontal ? cv::Rect(0, pos, at, 1) : cv::Rect(pos, 0, 1, at);
      patch(stripe & cv::Rect(0, 0, s.width, s.height)).setTo(cv::Scalar(240, 240, 240));
    }
  }
  cv::Mat out;
  patch.convertTo(out, CV_8UC3);
  return out;
}

cv::Mat sprite_mask(const SpriteSpec& s) {
  if (s.shape == SpriteShape::Rectangle) return cv::Mat(s.height, s.width, CV_8U, cv::Scalar(255));
  cv::Mat mask(s.height, s.width, CV_8U, cv::Scalar(0));
  cv::ellipse(mask, cv::Point2d((s.width - 1) / 2.0, (s.height - 1) / 2.0),
              cv::Size(std::max(1, s.width / 2), std::max(1, s.height / 2)), 0, 0, 360,
              cv::Scalar(255), cv::FILLED);
  return mask;
}

long rounded(double v) { return std::lround(v); }

}  // namespace

cv::Point2d Trajectory::displacement(int t) const {
  switch (kind) {
    case Kind::Static:
      return {0.0, 0.0};
    case Kind::Linear:
      return {vx * t, vy * t};
    case Kind::StopAndGo: {
      const int cycle = go_frames + stop_frames;
      const int moved = (t / cycle) * go_frames + std::min(t % cycle, go_frames);
      return {vx * moved, vy * moved};
    }
  }
  return {0.0, 0.0};
}

double Trajectory::speed_at(int t) const {
  const double v = std::hypot(vx, vy);
  switch (kind) {
    case Kind::Static:
      return 0.0;
    case Kind::Linear:
      return v;
    case Kind::StopAndGo: {
      const int cycle = go_frames + stop_frames;
      const int step = std::max(t, 1) - 1;
      return step % cycle < go_frames ? v : 0.0;
    }
  }
  return 0.0;
}

cv::Point sprite_position(const SynthSceneSpec& spec, const SpriteSpec& s, int t) {
  const auto d = s.trajectory.displacement(t);
  return {static_cast<int>(rounded(s.origin.x + d.x + spec.camera_pan.x * t)),
          static_cast<int>(rounded(s.origin.y + d.y + spec.camera_pan.y * t))};
}

void validate_spec(const SynthSceneSpec& spec) {
  if (spec.canvas.width <= 2 || spec.canvas.height <= 2) throw ConfigError(spec.name + ": canvas too small");
  if (spec.n_frames < 1) throw ConfigError(spec.name + ": n_frames must be >= 1");
  for (std::size_t i = 0; i < spec.sprites.size(); ++i) {
    const auto& s = spec.sprites[i];
    if (s.width < 1 || s.height < 1) throw ConfigError(spec.name + ": sprite with empty extent");
    if (s.trajectory.kind == Trajectory::Kind::StopAndGo &&
        (s.trajectory.go_frames < 1 || s.trajectory.stop_frames < 0)) {
      throw ConfigError(spec.name + ": invalid stop-and-go period");
    }
    for (int t = 0; t < spec.n_frames; ++t) {
      const auto p = sprite_position(spec, s, t);
      if (p.x < 1 || p.y < 1 || p.x + s.width > spec.canvas.width - 1 ||
          p.y + s.height > spec.canvas.height - 1) {
        throw ConfigError(spec.name + ": sprite " + std::to_string(i) + " leaves the canvas at frame " +
                          std::to_string(t));
      }
    }
  }
}

SynthVideo generate_video(const SynthSceneSpec& spec) {
  validate_spec(spec);
  // Background world large enough for the whole camera path.
  long min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (int t = 0; t < spec.n_frames; ++t) {
    const long sx = rounded(spec.camera_pan.x * t), sy = rounded(spec.camera_pan.y * t);
    min_x = std::min(min_x, sx), max_x = std::max(max_x, sx);
    min_y = std::min(min_y, sy), max_y = std::max(max_y, sy);
  }
  const cv::Size world_size(spec.canvas.width + static_cast<int>(max_x - min_x),
                            spec.canvas.height + static_cast<int>(max_y - min_y));
  const cv::Mat world = background_texture(world_size, spec.background_seed);

  std::vector<cv::Mat> textures, masks;
  for (const auto& s : spec.sprites) {
    textures.push_back(sprite_texture(s));
    masks.push_back(sprite_mask(s));
  }

  SynthVideo out;
  auto& seq = out.sequence;
  seq.name = spec.name;
  seq.fps = spec.fps;
  seq.frame_size = spec.canvas;
  out.movers.resize(static_cast<std::size_t>(spec.n_frames));
  for (int t = 0; t < spec.n_frames; ++t) {
    // Content moves by +pan, so the crop window moves by -pan.
    const int ox = static_cast<int>(max_x - rounded(spec.camera_pan.x * t));
    const int oy = static_cast<int>(max_y - rounded(spec.camera_pan.y * t));
    FrameRecord rec;
    rec.pixels = world(cv::Rect(ox, oy, spec.canvas.width, spec.canvas.height)).clone();
    rec.index = t;
    rec.timestamp = t / spec.fps;
    for (std::size_t i = 0; i < spec.sprites.size(); ++i) {
      const auto& s = spec.sprites[i];
      const auto p = sprite_position(spec, s, t);
      textures[i].copyTo(rec.pixels(cv::Rect(p.x, p.y, s.width, s.height)), masks[i]);
      if (s.trajectory.speed_at(t) >= spec.motion_threshold) {
        out.movers[static_cast<std::size_t>(t)].push_back(static_cast<int>(i));
        seq.annotations.push_back({{static_cast<double>(p.x), static_cast<double>(p.y),
                                    static_cast<double>(p.x + s.width), static_cast<double>(p.y + s.height)},
                                   s.label,
                                   t});
      }
    }
    seq.frames.push_back(std::move(rec));
  }
  return out;
}

std::vector<SynthSceneSpec> standard_suites(cv::Size canvas, int n_frames) {
  std::vector<SynthSceneSpec> out;
  for (const char* name : {"s1", "s2", "s3", "s4", "s5"}) out.push_back(standard_suite(name, canvas, n_frames));
  return out;
}

SynthSceneSpec standard_suite(const std::string& name, cv::Size canvas, int n_frames) {
  SynthSceneSpec spec;
  spec.canvas = canvas;
  spec.n_frames = n_frames;
  const double W = canvas.width, H = canvas.height;
  const double travel = std::max(1, n_frames - 1);

  if (name == "s1") {
    spec.name = "s1_single_mover";
    spec.background_seed = 101;
    SpriteSpec truck;
    truck.label = ClassLabel::HeavyVehicle;
    truck.width = 48;
    truck.height = 24;
    truck.texture_seed = 11;
    truck.origin = {0.15 * W, 0.4 * H};
    truck.trajectory = Trajectory::linear(3.0, 1.0);
    spec.sprites = {truck};
  } else if (name == "s2") {
    spec.name = "s2_mover_static_distractor";
    spec.background_seed = 202;
    SpriteSpec car;
    car.label = ClassLabel::Car;
    car.width = 28;
    car.height = 16;
    car.texture_seed = 22;
    SpriteSpec mover = car;
    mover.origin = {0.2 * W, 0.6 * H};
    mover.trajectory = Trajectory::linear(2.0, 0.0);
    SpriteSpec distractor = car;
    distractor.origin = {0.4 * W, 0.6 * H - car.height - 10};
    spec.sprites = {mover, distractor};
  } else if (name == "s3") {
    spec.name = "s3_dense_movers";
    spec.background_seed = 303;
    std::mt19937_64 rng(3030);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 20; ++i) {
      SpriteSpec s;
      s.label = i % 4 == 0 ? ClassLabel::HeavyVehicle : ClassLabel::Car;
      s.width = s.label == ClassLabel::Car ? 14 + static_cast<int>(unit() * 8) : 26 + static_cast<int>(unit() * 8);
      s.height = s.width / 2 + 2;
      s.texture_seed = 300 + static_cast<std::uint64_t>(i);
      const double angle = unit() * 2.0 * 3.141592653589793;
      const double speed = 1.0 + unit();
      s.trajectory = Trajectory::linear(std::round(speed * std::cos(angle)), std::round(speed * std::sin(angle)));
      if (s.trajectory.vx == 0.0 && s.trajectory.vy == 0.0) s.trajectory.vx = 1.0;
      // Start so the whole path stays inside the canvas.
      const double dx = s.trajectory.vx * travel, dy = s.trajectory.vy * travel;
      const double lo_x = 2 + std::max(0.0, -dx), hi_x = W - 2 - s.width - std::max(0.0, dx);
      const double lo_y = 2 + std::max(0.0, -dy), hi_y = H - 2 - s.height - std::max(0.0, dy);
      s.origin = {std::floor(lo_x + unit() * std::max(0.0, hi_x - lo_x)),
                  std::floor(lo_y + unit() * std::max(0.0, hi_y - lo_y))};
      spec.sprites.push_back(s);
    }
  } else if (name == "s4") {
    spec.name = "s4_camera_pan";
    spec.background_seed = 404;
    spec.camera_pan = {1.0, 0.0};
    SpriteSpec a;
    a.label = ClassLabel::Car;
    a.width = 24;
    a.height = 14;
    a.texture_seed = 41;
    a.origin = {0.1 * W, 0.2 * H};
    a.trajectory = Trajectory::linear(2.0, 0.0);
    SpriteSpec b = a;
    b.label = ClassLabel::HeavyVehicle;
    b.width = 40;
    b.height = 20;
    b.texture_seed = 42;
    b.origin = {0.5 * W, 0.3 * H};
    b.trajectory = Trajectory::linear(0.0, 2.0);
    SpriteSpec c = a;
    c.texture_seed = 43;
    c.origin = {0.15 * W, 0.75 * H};
    c.trajectory = Trajectory::still();
    SpriteSpec d = b;
    d.texture_seed = 44;
    d.origin = {0.45 * W, 0.8 * H};
    d.trajectory = Trajectory::still();
    spec.sprites = {a, b, c, d};
  } else if (name == "s5") {
    spec.name = "s5_multi_scale";
    spec.background_seed = 505;
    SpriteSpec small;
    small.label = ClassLabel::Car;
    small.width = 8;
    small.height = 8;
    small.texture_seed = 51;
    small.origin = {0.1 * W, 0.1 * H};
    small.trajectory = Trajectory::linear(2.0, 1.0);
    SpriteSpec large;
    large.label = ClassLabel::HeavyVehicle;
    large.width = 80;
    large.height = 40;
    large.texture_seed = 52;
    large.origin = {0.1 * W, 0.55 * H};
    large.trajectory = Trajectory::linear(2.0, 0.0);
    spec.sprites = {small, large};
  } else {
    throw ConfigError("unknown synthetic suite '" + name + "' (expected s1..s5)");
  }
  return spec;
}

}  // namespace mor::synth
