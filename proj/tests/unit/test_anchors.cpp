#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mor/detector/anchors.hpp"
#include "mor/detector/box_coder.hpp"
#include "mor/detector/variant.hpp"
#include "mor/error.hpp"

using namespace mor;
using namespace mor::detector;

TEST_CASE("pyramid level shapes at 608 follow ceil division") {
  const int expected[] = {76, 38, 19, 10, 5};
  for (int l = 0; l < kNumLevels; ++l) {
    const int oracle = (608 + kPyramidStrides[static_cast<std::size_t>(l)] - 1) / kPyramidStrides[static_cast<std::size_t>(l)];
    CHECK(level_shape({608, 608}, l) == cv::Size(expected[l], expected[l]));
    CHECK(oracle == expected[l]);
  }
  CHECK(level_shape({256, 200}, 0) == cv::Size(32, 25));
}

TEST_CASE("anchor grid size matches the analytic count") {
  const AnchorConfig cfg;
  for (cv::Size s : {cv::Size(608, 608), cv::Size(256, 256), cv::Size(100, 60)}) {
    const auto g = generate_anchors(s, cfg);
    std::size_t n = 0;
    for (int l = 0; l < kNumLevels; ++l) n += static_cast<std::size_t>(level_shape(s, l).area()) * 9;
    CHECK(g.size() == n);
    CHECK(anchor_count(s, cfg) == n);
    CHECK(g.level_offsets[kNumLevels] == n);
    CHECK(g.per_location == 9);
  }
}

TEST_CASE("anchor layout: level, row, column, type") {
  const AnchorConfig cfg;
  const auto g = generate_anchors({64, 64}, cfg);
  // P3 cell (0, 1): centered at (12, 4) with stride 8.
  const auto& a = g.anchors[9 * 1];
  CHECK(a.cx == doctest::Approx(12.0));
  CHECK(a.cy == doctest::Approx(4.0));
  // First type: scale 1, ratio 0.5 (h / w) at constant area 32^2.
  const auto& t0 = g.anchors[0];
  CHECK(t0.w * t0.h == doctest::Approx(32.0 * 32.0));
  CHECK(t0.h / t0.w == doctest::Approx(0.5));
  // P4 anchors are twice as large (type 3: scale 1, ratio 1).
  const auto& p4 = g.anchors[g.level_offsets[1] + 3];
  CHECK(p4.w == doctest::Approx(64.0));
  CHECK(p4.h == doctest::Approx(64.0));
}

TEST_CASE("encoding an anchor's own box gives zero deltas") {
  const BoxCoder coder;
  const Anchor a{50, 60, 32, 16};
  const auto d = coder.encode(a.box(), a);
  for (double v : d) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("log-size deltas double the anchor under unit variances") {
  const BoxCoder unit{{1.0, 1.0, 1.0, 1.0}};
  const Anchor a{100, 100, 32, 32};
  const auto b = unit.decode({0, 0, std::log(2.0), std::log(2.0)}, a);
  CHECK(b.width() == doctest::Approx(64.0));
  CHECK(b.height() == doctest::Approx(64.0));
  CHECK(b.center_x() == doctest::Approx(100.0));
  CHECK(b.center_y() == doctest::Approx(100.0));
}

TEST_CASE("encode then decode round-trips") {
  const BoxCoder coder;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.0, 600.0), size(4.0, 300.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = pos(rng), y = pos(rng);
    const BoundingBox b{x, y, x + size(rng), y + size(rng)};
    const Anchor a{pos(rng), pos(rng), size(rng), size(rng)};
    const auto r = coder.decode(coder.encode(b, a), a);
    worst = std::max({worst, std::abs(r.x1 - b.x1), std::abs(r.y1 - b.y1), std::abs(r.x2 - b.x2),
                      std::abs(r.y2 - b.y2)});
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("decode rejects non-finite deltas and clips on request") {
  const BoxCoder coder;
  const Anchor a{10, 10, 32, 32};
  CHECK_THROWS_AS((void)coder.decode({std::numeric_limits<double>::quiet_NaN(), 0, 0, 0}, a), NumericError);
  CHECK_THROWS_AS((void)coder.decode({0, 0, std::numeric_limits<double>::infinity(), 0}, a), NumericError);
  const auto c = coder.decode_clipped({0, 0, 0, 0}, a, 20, 20);
  CHECK(c == BoundingBox{0, 0, 20, 20});
  const auto big = coder.decode({0, 0, 1e6, 1e6}, a);
  CHECK(std::isfinite(big.width()));
}

TEST_CASE("variants imply backbone and stream layout") {
  const auto v1 = make_variant(Version::V1, {1, 3});
  CHECK(v1.backbone.family == BackboneFamily::ResNet50);
  CHECK(v1.dual_stream);
  CHECK(v1.flow_channels() == 2);
  CHECK(v1.motion_input_channels() == 5);
  const auto v4 = make_variant(Version::V4, {1});
  CHECK(v4.backbone.family == BackboneFamily::MobileNetV2);
  CHECK_FALSE(v4.dual_stream);
  CHECK(make_variant(Version::V2, {1}).backbone.family == BackboneFamily::ResNet50);
  CHECK(make_variant(Version::V3, {1}).dual_stream);
  CHECK(version_from_string("v3") == Version::V3);
  CHECK_THROWS_AS((void)version_from_string("v5"), ConfigError);
  auto bad = v1;
  bad.dual_stream = false;
  CHECK_THROWS_AS(validate_variant(bad), ConfigError);
}
