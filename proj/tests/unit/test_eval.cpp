#include <doctest.h>

#include <cmath>
#include <random>

#include "mor/error.hpp"
#include "mor/eval/average_precision.hpp"
#include "mor/eval/report.hpp"
#include "oracles.hpp"

using namespace mor;
using namespace mor::eval;
using inference::Detection;

namespace {

MovingObjectInstance gt(double x, double y, double s, ClassLabel c, std::int64_t f) {
  return {{x, y, x + s, y + s}, c, f};
}

Detection hit(const MovingObjectInstance& g, double score, double jitter = 0.0) {
  return {{g.box.x1 + jitter, g.box.y1 + jitter, g.box.x2 + jitter, g.box.y2 + jitter}, g.label, score, g.frame_index};
}

std::vector<MovingObjectInstance> grid_gt(int n, ClassLabel c) {
  std::vector<MovingObjectInstance> out;
  for (int i = 0; i < n; ++i) out.push_back(gt(30.0 * i, 0, 20, c, i % 3));
  return out;
}

std::vector<oracle::Det> to_oracle(const std::vector<Detection>& d) {
  std::vector<oracle::Det> o;
  for (const auto& x : d) o.push_back({{x.box.x1, x.box.y1, x.box.x2, x.box.y2}, class_id(x.label), x.score, x.frame_index});
  return o;
}

std::vector<oracle::Det> to_oracle(const std::vector<MovingObjectInstance>& g) {
  std::vector<oracle::Det> o;
  for (const auto& x : g) o.push_back({{x.box.x1, x.box.y1, x.box.x2, x.box.y2}, class_id(x.label), 1.0, x.frame_index});
  return o;
}

}  // namespace

TEST_CASE("perfect detections score 1, none score 0") {
  const auto g = grid_gt(6, ClassLabel::Car);
  std::vector<Detection> d;
  for (const auto& x : g) d.push_back(hit(x, 1.0));
  CHECK(average_precision(d, g, 0.5, ClassLabel::Car).ap == 1.0);
  CHECK(average_precision({}, g, 0.5, ClassLabel::Car).ap == 0.0);
}

TEST_CASE("crafted five detections against three ground truths") {
  const std::vector<MovingObjectInstance> g{gt(0, 0, 20, ClassLabel::Car, 0), gt(50, 0, 20, ClassLabel::Car, 0),
                                            gt(0, 0, 20, ClassLabel::Car, 1)};
  const std::vector<Detection> d{hit(g[0], 0.9),  {{100, 100, 120, 120}, ClassLabel::Car, 0.8, 0},
                                 hit(g[0], 0.7),  hit(g[2], 0.6, 2.0),
                                 {{52, 0, 75, 20}, ClassLabel::Car, 0.5, 0}};
  const auto r = average_precision(d, g, 0.5, ClassLabel::Car);
  CHECK(r.ap == oracle::average_precision(to_oracle(d), to_oracle(g), 0, 0.5));
  // Ranked hits: TP, FP, FP (duplicate), TP, TP -> precision envelope 1, 0.6, 0.6.
  CHECK(r.ap == doctest::Approx(1.0 / 3 + 0.6 * 2.0 / 3));
  CHECK(r.true_positives == 3);
}

TEST_CASE("duplicate hits are false positives") {
  const auto g = grid_gt(1, ClassLabel::Car);
  const auto r = average_precision({hit(g[0], 0.9), hit(g[0], 0.8)}, g, 0.5, ClassLabel::Car);
  CHECK(r.true_positives == 1);
  CHECK(r.curve.precision.back() == 0.5);
}

TEST_CASE("unknown class id is an error") {
  CHECK_THROWS_AS((void)average_precision({}, grid_gt(1, ClassLabel::Car), 0.5, 2), Error);
  CHECK_THROWS_AS((void)average_precision({}, grid_gt(1, ClassLabel::Car), 0.5, -1), Error);
}

TEST_CASE("mAP is the two-class mean") {
  const auto cars = grid_gt(5, ClassLabel::Car);
  const auto heavy = [] {
    std::vector<MovingObjectInstance> h;
    for (int i = 0; i < 5; ++i) h.push_back(gt(30.0 * i, 100, 20, ClassLabel::HeavyVehicle, 0));
    return h;
  }();
  std::vector<MovingObjectInstance> all = cars;
  all.insert(all.end(), heavy.begin(), heavy.end());
  std::vector<Detection> d;
  for (int i = 0; i < 4; ++i) d.push_back(hit(cars[static_cast<std::size_t>(i)], 0.9));
  for (int i = 0; i < 2; ++i) d.push_back(hit(heavy[static_cast<std::size_t>(i)], 0.9));
  const auto r = map_at_iou(d, all, 0.5);
  CHECK(r.per_class_ap.at(ClassLabel::Car) == doctest::Approx(0.8));
  CHECK(r.per_class_ap.at(ClassLabel::HeavyVehicle) == doctest::Approx(0.4));
  CHECK(r.map_value == doctest::Approx(0.6));
}

TEST_CASE("an absent class is excluded from the mean") {
  const auto cars = grid_gt(4, ClassLabel::Car);
  std::vector<Detection> d{hit(cars[0], 0.9), hit(cars[1], 0.8)};
  d.push_back({{0, 0, 9, 9}, ClassLabel::HeavyVehicle, 0.95, 0});
  const auto r = map_at_iou(d, cars, 0.5);
  CHECK(r.map_value == r.per_class_ap.at(ClassLabel::Car));
  REQUIRE(r.absent_classes.size() == 1);
  CHECK(r.absent_classes[0] == ClassLabel::HeavyVehicle);
}

TEST_CASE("mAP without any ground truth is an error") {
  CHECK_THROWS_AS((void)map_at_iou({}, {}, 0.5), Error);
}

TEST_CASE("sweep: one report per threshold, perfect detections everywhere") {
  const auto g = grid_gt(6, ClassLabel::HeavyVehicle);
  std::vector<Detection> d;
  for (const auto& x : g) d.push_back(hit(x, 0.7));
  const auto s = iou_sweep(d, g);
  REQUIRE(s.size() == 7);
  for (const auto& r : s) CHECK(r.map_value == 1.0);
  CHECK(s.front().iou_threshold == 0.2);
  CHECK(s.back().iou_threshold == 0.8);
}

TEST_CASE("jittered detections give a non-increasing sweep") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<MovingObjectInstance> g;
  std::vector<Detection> d;
  for (int i = 0; i < 40; ++i) {
    g.push_back(gt(25.0 * (i % 10), 25.0 * (i / 10), 20, class_from_id(i % 2), 0));
    const double j = sign(rng) ? 2.0 : -2.0;
    const double k = static_cast<double>(i % 4);
    auto x = hit(g.back(), 0.5 + 0.01 * i);
    x.box = {x.box.x1 + j, x.box.y1 + k, x.box.x2 + j, x.box.y2 - k};
    d.push_back(x);
  }
  const auto s = iou_sweep(d, g);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].map_value <= s[i - 1].map_value);
  for (const auto& r : s) {
    const double ref = (oracle::average_precision(to_oracle(d), to_oracle(g), 0, r.iou_threshold) +
                        oracle::average_precision(to_oracle(d), to_oracle(g), 1, r.iou_threshold)) /
                       2;
    CHECK(r.map_value == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("AP depends only on the ranking of scores") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MovingObjectInstance> g;
    std::vector<Detection> d;
    for (int i = 0; i < 10; ++i) {
      const auto b = oracle::random_box(rng, 20);
      g.push_back({{b.x1, b.y1, b.x2, b.y2}, ClassLabel::Car, 0});
    }
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 15; ++i) {
      const auto b = oracle::random_box(rng, 20);
      d.push_back({{b.x1, b.y1, b.x2, b.y2}, ClassLabel::Car, u(rng), 0});
    }
    auto t = d;
    for (auto& x : t) x.score = std::pow(x.score, 3.0) * 0.5 + 0.1;
    CHECK(average_precision(d, g, 0.3, ClassLabel::Car).ap == average_precision(t, g, 0.3, ClassLabel::Car).ap);
  }
}

TEST_CASE("adding a matching detection at the end never lowers AP") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MovingObjectInstance> g;
    std::vector<Detection> d;
    for (int i = 0; i < 8; ++i) g.push_back(gt(30.0 * i, 0, 20, ClassLabel::Car, 0));
    for (int i = 0; i < 6; ++i) {
      const auto b = oracle::random_box(rng, 100);
      d.push_back({{b.x1, b.y1, b.x2, b.y2}, ClassLabel::Car, 0.5 + 0.01 * i, 0});
    }
    d.push_back(hit(g[0], 0.9));
    const double before = average_precision(d, g, 0.5, ClassLabel::Car).ap;
    d.push_back(hit(g[7], 0.01));
    CHECK(average_precision(d, g, 0.5, ClassLabel::Car).ap >= before);
  }
}

TEST_CASE("per-video and pooled evaluation") {
  const auto a = grid_gt(4, ClassLabel::Car);
  const auto b = grid_gt(2, ClassLabel::Car);
  VideoResults va{"a", {200, 200}, {hit(a[0], 0.9), hit(a[1], 0.8)}, a};
  VideoResults vb{"b", {200, 200}, {hit(b[0], 0.7), hit(b[1], 0.6)}, b};
  const auto r = evaluate_videos({va, vb}, 0.5);
  REQUIRE(r.per_video.size() == 2);
  CHECK(r.per_video.at("a").map_value == doctest::Approx(0.5));
  CHECK(r.per_video.at("b").map_value == doctest::Approx(1.0));
  REQUIRE(r.video_average.has_value());
  CHECK(*r.video_average == doctest::Approx(0.75));
  // Pooled: frames of b are distinct from frames of a even though indices collide.
  CHECK(r.map_value == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("video average of a table row is the unweighted mean") {
  const double row[] = {86.94, 32.48, 85.18, 29.64};
  double sum = 0;
  for (double v : row) sum += v;
  CHECK(std::round(sum / 4 * 100) / 100 == 58.56);
}

TEST_CASE("detections fully outside the frame are discarded with a count") {
  std::vector<Detection> d{{{-30, -30, -5, -5}, ClassLabel::Car, 0.9, 0}, {{0, 0, 5, 5}, ClassLabel::Car, 0.9, 0}};
  CHECK(discard_outside(d, {100, 100}) == 1);
  CHECK(d.size() == 1);
}

TEST_CASE("report formats") {
  const auto g = grid_gt(2, ClassLabel::Car);
  const auto s = iou_sweep({hit(g[0], 0.9)}, g);
  const auto table = format_report_table(s);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 7 * 2);
  const auto series = format_sweep_series(s);
  CHECK(std::count(series.begin(), series.end(), '\n') == 8);
  const auto j = report_to_json(s[0]);
  CHECK(j.at("map").get<double>() == doctest::Approx(0.5));
}
