#include <doctest.h>

#include <random>

#include "mor/error.hpp"
#include "mor/training/assign.hpp"
#include "mor/training/train_config.hpp"
#include "oracles.hpp"

using namespace mor;
using namespace mor::training;

namespace {

detector::Anchor from_box(const oracle::Box& b) {
  return {(b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2, b.x2 - b.x1, b.y2 - b.y1};
}

}  // namespace

TEST_CASE("a ground truth equal to an anchor makes it positive") {
  const std::vector<detector::Anchor> anchors{{16, 16, 32, 32}, {100, 100, 32, 32}};
  const std::vector<MovingObjectInstance> gt{{anchors[1].box(), ClassLabel::HeavyVehicle, 0}};
  const auto t = assign_anchors(anchors, gt);
  CHECK(t[1].label == 1);
  CHECK(t[1].gt_index == 0);
  CHECK(t[1].max_iou == 1.0);
  CHECK(t[0].label == AnchorTarget::kNegative);
}

TEST_CASE("no ground truth makes every anchor negative") {
  const std::vector<detector::Anchor> anchors{{16, 16, 32, 32}, {40, 40, 8, 8}};
  for (const auto& t : assign_anchors(anchors, {})) CHECK(t.label == AnchorTarget::kNegative);
}

TEST_CASE("overlap between the thresholds is ignored") {
  // Anchor box (3,0,23,10) against gt (0,0,20,10): IoU = 170 / 230. The second
  // anchor matches the gt exactly, so no rescue happens.
  const std::vector<detector::Anchor> anchors{{13, 5, 20, 10}, {10, 5, 20, 10}};
  const std::vector<MovingObjectInstance> gt{{{0, 0, 20, 10}, ClassLabel::Car, 0}};
  CHECK(assign_anchors(anchors, gt, {0.5, 0.4})[0].label == 0);
  CHECK(assign_anchors(anchors, gt, {0.8, 0.7})[0].label == AnchorTarget::kIgnore);
  CHECK(assign_anchors(anchors, gt, {0.9, 0.8})[0].label == AnchorTarget::kNegative);
}

TEST_CASE("an unmatched ground truth claims its best anchor") {
  const std::vector<detector::Anchor> anchors{{16, 16, 32, 32}, {48, 16, 32, 32}};
  const std::vector<MovingObjectInstance> gt{{{30, 10, 40, 20}, ClassLabel::Car, 0}};
  const auto t = assign_anchors(anchors, gt);
  CHECK(t[1].label == 0);
  CHECK(t[1].gt_index == 0);
  CHECK(t[0].label == AnchorTarget::kNegative);
}

TEST_CASE("assignment equals the brute-force reference") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> thr(0.2, 0.7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<oracle::Box> a_boxes, g_boxes;
    std::vector<int> classes;
    std::vector<detector::Anchor> anchors;
    std::vector<MovingObjectInstance> gt;
    for (int i = 0; i < 100; ++i) {
      a_boxes.push_back(oracle::random_box(rng, 12));
      anchors.push_back(from_box(a_boxes.back()));
    }
    for (int i = 0; i < 3; ++i) {
      g_boxes.push_back(oracle::random_box(rng, 12));
      classes.push_back(static_cast<int>(rng() % 2));
      const auto& b = g_boxes.back();
      gt.push_back({{b.x1, b.y1, b.x2, b.y2}, class_from_id(classes.back()), 0});
    }
    const double pos = thr(rng), neg = pos - 0.1;
    const auto got = assign_anchors(anchors, gt, {pos, neg});
    const auto want = oracle::assign(a_boxes, g_boxes, classes, pos, neg);
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].label == want[i].label);
      if (got[i].label >= 0) CHECK(got[i].gt_index == want[i].gt);
      CHECK(got[i].max_iou == want[i].max_iou);
    }
  }
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.learning_rate == 1e-5);
  CHECK(c.batch_size == 1);
  CHECK(c.focal_alpha == 0.25);
  CHECK(c.focal_gamma == 2.0);
  c.assignment = {0.3, 0.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.learning_rate = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
