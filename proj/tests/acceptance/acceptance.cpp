// Acceptance runner: one PASS/FAIL/SKIP line per criterion, exit status 1 on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mor/core/dataset.hpp"
#include "mor/core/geometry.hpp"
#include "mor/detector/model.hpp"
#include "mor/detector/runtime.hpp"
#include "mor/error.hpp"
#include "mor/eval/average_precision.hpp"
#include "mor/flow/flow.hpp"
#include "mor/flow/ring_buffer.hpp"
#include "mor/inference/detection.hpp"
#include "mor/inference/infer.hpp"
#include "mor/inference/nms.hpp"
#include "mor/synth/synth.hpp"
#include "mor/training/assign.hpp"
#include "mor/training/losses.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mor;
using inference::Detection;

namespace {

struct Outcome {
  enum class Status { Pass, Fail, Skip };
  Status status{Status::Fail};
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Status::Fail, std::move(d)}; }
Outcome verdict(bool ok, std::string d) { return ok ? pass(std::move(d)) : fail(std::move(d)); }

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// ---------------------------------------------------------------- 1

Outcome parameter_counts() {
  const std::pair<detector::Version, double> published[] = {{detector::Version::V1, 65.4e6},
                                                            {detector::Version::V2, 36.3e6},
                                                            {detector::Version::V3, 19.3e6},
                                                            {detector::Version::V4, 13.2e6}};
  bool ok = true;
  std::string detail;
  for (const auto& [v, target] : published) {
    double worst = 0.0;
    std::int64_t at_t3 = 0;
    for (const auto& lags : {std::vector<int>{1}, std::vector<int>{1, 3}, std::vector<int>{1, 3, 5}}) {
      detector::ModelOptions o;
      o.variant = detector::make_variant(v, lags);
      o.input_size = {128, 128};
      const auto n = detector::build_model(o)->parameter_count();
      if (lags.size() == 3) at_t3 = n;
      worst = std::max(worst, std::abs(static_cast<double>(n) - target) / target);
    }
    ok = ok && worst <= 0.10;
    detail += std::string(detector::version_name(v)) + " " + fmt(static_cast<double>(at_t3) / 1e6) + "M (worst " +
              fmt(100 * worst, 3) + "%) ";
  }
  return verdict(ok, detail + "tolerance 10%");
}

// ---------------------------------------------------------------- 2

torch::Tensor numeric_grad(const std::function<double(const torch::Tensor&)>& f, const torch::Tensor& x) {
  const double h = 1e-6;
  auto g = torch::zeros_like(x);
  auto flat = x.clone().view(-1);
  auto gf = g.view(-1);
  for (std::int64_t i = 0; i < flat.numel(); ++i) {
    const double v = flat[i].item<double>();
    flat[i] = v + h;
    const double up = f(flat.view(x.sizes()));
    flat[i] = v - h;
    const double down = f(flat.view(x.sizes()));
    flat[i] = v;
    gf[i] = (up - down) / (2 * h);
  }
  return g;
}

/// Denominators floored at 1e-4 so vanishing entries are compared absolutely.
double relative_error(const torch::Tensor& a, const torch::Tensor& b) {
  return ((a - b).abs() / b.abs().clamp_min(1e-4)).max().item<double>();
}

Outcome loss_correctness() {
  using training::AnchorTarget;
  const auto f64 = torch::TensorOptions().dtype(torch::kFloat64);
  auto labels = [](std::vector<std::int64_t> v) { return torch::tensor(v, torch::kInt64); };

  double closed = 0.0;
  auto against = [&](double got, double want) { closed = std::max(closed, std::abs(got - want)); };
  const auto logit9 = torch::full({1, 1}, std::log(9.0), f64);
  against(training::focal_loss(logit9, labels({0})).item<double>(), 0.25 * 0.01 * -std::log(0.9));
  against(training::focal_loss(logit9, labels({AnchorTarget::kNegative})).item<double>(),
          0.75 * 0.81 * -std::log(0.1));
  against(training::focal_loss(torch::zeros({4, 1}, f64), labels({0, 0, 0, 0}), -1.0, 0.0).item<double>(),
          std::log(2.0));
  const auto pos = torch::tensor({true});
  const auto zero = torch::zeros({1, 4}, f64);
  against(training::smooth_l1(torch::tensor({{0.5, 0.0, 0.0, 0.0}}, f64), zero, pos, 1.0).item<double>(), 0.125);
  against(training::smooth_l1(torch::tensor({{2.0, -3.0, 0.0, 0.0}}, f64), zero, pos, 1.0).item<double>(),
          1.5 + 2.5);
  against(training::smooth_l1(torch::tensor({{0.2, 0.0, 0.0, 0.0}}, f64), zero, pos, 0.5).item<double>(), 0.04);

  torch::manual_seed(21);
  const auto targets = labels({0, 1, AnchorTarget::kNegative, AnchorTarget::kIgnore, 1, AnchorTarget::kNegative});
  auto logits = (torch::randn({6, 2}, f64) * 2).requires_grad_(true);
  training::focal_loss(logits, targets).backward();
  const auto fd = numeric_grad(
      [&](const torch::Tensor& x) { return training::focal_loss(x, targets).item<double>(); }, logits.detach());
  const auto keep = targets.ne(AnchorTarget::kIgnore);
  const double focal_err = relative_error(logits.grad().index({keep}), fd.index({keep}));

  auto deltas = torch::tensor({{0.3, -0.2, 1.7, -2.4}, {0.1, 0.6, -0.45, 3.0}}, f64).requires_grad_(true);
  const auto target = torch::zeros({2, 4}, f64);
  const auto positive = torch::tensor({true, true});
  training::smooth_l1(deltas, target, positive, 1.0).backward();
  const auto fd2 = numeric_grad(
      [&](const torch::Tensor& x) { return training::smooth_l1(x, target, positive, 1.0).item<double>(); },
      deltas.detach());
  const double l1_err = relative_error(deltas.grad(), fd2);

  const double grad_err = std::max(focal_err, l1_err);
  return verdict(closed <= 1e-8 && grad_err < 1e-4, "closed-form max error " + fmt(closed, 3) +
                                                         " (<= 1e-8), gradient relative error " +
                                                         fmt(grad_err, 3) + " (< 1e-4)");
}

// ---------------------------------------------------------------- 3

BoundingBox to_box(const oracle::Box& b) { return {b.x1, b.y1, b.x2, b.y2}; }

Outcome geometry_oracles() {
  constexpr int kTrials = 1000;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 30), cls(0, 1), score(1, 10), frame(0, 2);
  std::uniform_real_distribution<double> unit(0.2, 0.8);
  int iou_bad = 0, assign_bad = 0, nms_bad = 0, ap_bad = 0;
  double ap_err = 0.0;

  for (int t = 0; t < kTrials; ++t) {
    const auto a = oracle::random_box(rng), b = oracle::random_box(rng);
    iou_bad += iou(to_box(a), to_box(b)) != oracle::raster_iou(a, b);
  }

  for (int t = 0; t < kTrials; ++t) {
    const int n_gt = std::uniform_int_distribution<int>(0, 5)(rng);
    const int n_anchor = std::uniform_int_distribution<int>(1, 30 - n_gt)(rng);
    std::vector<oracle::Box> ab, gb;
    std::vector<int> classes;
    std::vector<detector::Anchor> anchors;
    std::vector<MovingObjectInstance> gt;
    for (int i = 0; i < n_anchor; ++i) {
      ab.push_back(oracle::random_box(rng, 12));
      const auto& x = ab.back();
      anchors.push_back({(x.x1 + x.x2) / 2, (x.y1 + x.y2) / 2, x.x2 - x.x1, x.y2 - x.y1});
    }
    for (int i = 0; i < n_gt; ++i) {
      gb.push_back(oracle::random_box(rng, 12));
      classes.push_back(cls(rng));
      gt.push_back({to_box(gb.back()), class_from_id(classes.back()), 0});
    }
    const double hi = unit(rng), lo = hi - 0.1;
    const auto got = training::assign_anchors(anchors, gt, {hi, lo});
    const auto want = oracle::assign(ab, gb, classes, hi, lo);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].label == want[i].label && got[i].max_iou == want[i].max_iou &&
             (got[i].label < 0 || got[i].gt_index == want[i].gt);
    }
    assign_bad += !same;
  }

  for (int t = 0; t < kTrials; ++t) {
    std::vector<Detection> in;
    std::vector<oracle::Det> ref;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const auto b = oracle::random_box(rng, 16);
      in.push_back({to_box(b), class_from_id(cls(rng)), score(rng) / 10.0, 0});
      ref.push_back({b, class_id(in.back().label), in.back().score, 0});
    }
    const double thr = unit(rng);
    const auto got = inference::nms(in, thr);
    const auto want = oracle::nms(ref, thr);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) same = got[i] == in[want[i]];
    nms_bad += !same;
  }

  for (int t = 0; t < kTrials; ++t) {
    const int n_gt = std::uniform_int_distribution<int>(1, 10)(rng);
    const int n_det = std::uniform_int_distribution<int>(0, 30 - n_gt)(rng);
    std::vector<MovingObjectInstance> gt;
    std::vector<oracle::Det> gt_ref, det_ref;
    std::vector<Detection> dets;
    for (int i = 0; i < n_gt; ++i) {
      const auto b = oracle::random_box(rng, 12);
      gt.push_back({to_box(b), class_from_id(cls(rng)), frame(rng)});
      gt_ref.push_back({b, class_id(gt.back().label), 1.0, gt.back().frame_index});
    }
    for (int i = 0; i < n_det; ++i) {
      const auto b = oracle::random_box(rng, 12);
      dets.push_back({to_box(b), class_from_id(cls(rng)), score(rng) / 10.0, frame(rng)});
      det_ref.push_back({b, class_id(dets.back().label), dets.back().score, dets.back().frame_index});
    }
    const double thr = unit(rng);
    for (int c = 0; c < 2; ++c) {
      const double got = eval::average_precision(dets, gt, thr, c).ap;
      const double want = oracle::average_precision(det_ref, gt_ref, c, thr);
      ap_err = std::max(ap_err, std::abs(got - want));
    }
  }
  ap_bad = ap_err > 1e-12;

  return verdict(iou_bad == 0 && assign_bad == 0 && nms_bad == 0 && ap_bad == 0,
                 std::to_string(kTrials) + " instances each: iou mismatches " + std::to_string(iou_bad) +
                     ", assignment " + std::to_string(assign_bad) + ", nms " + std::to_string(nms_bad) +
                     ", AP max difference " + fmt(ap_err, 3) + " (<= 1e-12)");
}

// ---------------------------------------------------------------- 4

Outcome perfect_detector() {
  std::vector<eval::VideoResults> perfect, empty;
  for (const auto& spec : synth::standard_suites()) {
    const auto video = synth::generate_video(spec).sequence;
    eval::VideoResults r{video.name, video.frame_size, {}, video.annotations};
    empty.push_back(r);
    for (const auto& g : video.annotations) r.detections.push_back({g.box, g.label, 1.0, g.frame_index});
    perfect.push_back(std::move(r));
  }
  double lowest = 1.0, highest_empty = 0.0;
  for (double thr : eval::kDefaultSweep) {
    const auto p = eval::evaluate_videos(perfect, thr);
    lowest = std::min(lowest, p.map_value);
    for (const auto& [label, ap] : p.per_class_ap) lowest = std::min(lowest, ap);
    const auto e = eval::evaluate_videos(empty, thr);
    highest_empty = std::max(highest_empty, e.map_value);
    for (const auto& [label, ap] : e.per_class_ap) highest_empty = std::max(highest_empty, ap);
  }
  return verdict(lowest == 1.0 && highest_empty == 0.0,
                 "suites s1-s5, thresholds 0.2-0.8: min mAP with ground truth " + fmt(lowest) +
                     ", max AP with no detections " + fmt(highest_empty));
}

// ---------------------------------------------------------------- 5

double masked_median(const cv::Mat& values, const cv::Mat& mask) {
  std::vector<float> v;
  for (int y = 0; y < values.rows; ++y)
    for (int x = 0; x < values.cols; ++x)
      if (mask.at<std::uint8_t>(y, x)) v.push_back(values.at<float>(y, x));
  if (v.empty()) return NAN;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

Outcome flow_fidelity() {
  double worst = 0.0;
  for (int d = 1; d <= 8; ++d) {
    const std::pair<cv::Point2d, cv::Point2d> cases[] = {{{double(d), 0.0}, {0.0, double(d)}},
                                                         {{0.0, double(d)}, {double(d), 0.0}},
                                                         {{double(d), double(d)}, {-double(d), 0.0}}};
    for (const auto& [pan, sprite_motion] : cases) {
      synth::SynthSceneSpec spec;
      spec.canvas = {256, 256};
      spec.n_frames = 2;
      spec.camera_pan = pan;
      synth::SpriteSpec s;
      s.width = 56;
      s.height = 40;
      s.origin = {100, 100};
      s.trajectory = synth::Trajectory::linear(sprite_motion.x - pan.x, sprite_motion.y - pan.y);
      s.texture_seed = static_cast<std::uint64_t>(d);
      spec.sprites = {s};
      spec.background_seed = static_cast<std::uint64_t>(100 + d);
      const auto video = synth::generate_video(spec).sequence;
      const auto f = flow::compute_dense_flow(video.frame(0), video.frame(1));

      const cv::Point p0 = synth::sprite_position(spec, s, 0), p1 = synth::sprite_position(spec, s, 1);
      const cv::Rect body0(p0.x, p0.y, s.width, s.height), body1(p1.x, p1.y, s.width, s.height);
      const int m = 6;
      cv::Mat sprite_mask = cv::Mat::zeros(spec.canvas, CV_8U);
      sprite_mask(cv::Rect(p1.x + m, p1.y + m, s.width - 2 * m, s.height - 2 * m)).setTo(1);
      cv::Mat bg_mask = cv::Mat::zeros(spec.canvas, CV_8U);
      bg_mask(cv::Rect(24, 24, spec.canvas.width - 48, spec.canvas.height - 48)).setTo(1);
      const cv::Size grow(2 * m + d, 2 * m + d);
      bg_mask(cv::Rect(body0.tl() - cv::Point(m + d, m + d), body0.size() + grow + grow) & cv::Rect({}, spec.canvas))
          .setTo(0);
      bg_mask(cv::Rect(body1.tl() - cv::Point(m + d, m + d), body1.size() + grow + grow) & cv::Rect({}, spec.canvas))
          .setTo(0);

      worst = std::max({worst, std::abs(masked_median(f.u, sprite_mask) - sprite_motion.x),
                        std::abs(masked_median(f.v, sprite_mask) - sprite_motion.y),
                        std::abs(masked_median(f.u, bg_mask) - pan.x), std::abs(masked_median(f.v, bg_mask) - pan.y)});
    }
  }
  return verdict(worst <= 0.5, "1-8 px sprite and background translations: worst median error " + fmt(worst, 3) +
                                   " px per axis (<= 0.5)");
}

// ---------------------------------------------------------------- 6, 7, 10

struct Cli {
  fs::path runs;

  std::string run(const std::string& args, int* code) const {
    const std::string cmd = std::string(MOR_CLI) + " " + args + " --runs-dir " + runs.string() + " 2>&1";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw Error("cannot start " + cmd);
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
    const int status = pclose(pipe);
    *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
  }

  std::string ok(const std::string& args) const {
    int code = 0;
    auto out = run(args, &code);
    if (code != 0) throw Error("mor " + args.substr(0, args.find(' ')) + " failed: " + out);
    return out;
  }
};

std::string field(const std::string& output, const std::string& key) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct OverfitResults {
  Outcome overfit;
  Outcome discrimination;
  Outcome determinism;
};

OverfitResults overfit_pipeline() {
  const fs::path root = fs::temp_directory_path() / "mor_acceptance";
  fs::remove_all(root);
  const Cli cli{root / "runs"};
  const int frames = 25;
  const cv::Size canvas{256, 256};

  const fs::path data = fs::path(field(cli.ok("synth --suite s1,s2 --frames 25 --canvas 256"), "run_dir")) / "data";
  const auto s1 = synth::standard_suite("s1", canvas, frames), s2 = synth::standard_suite("s2", canvas, frames);
  const fs::path v1 = data / s1.name, v2 = data / s2.name;

  const auto train = cli.ok("train --dataset " + v1.string() + "," + v2.string() +
                            " --variant v4 --lags 1,3 --input-size 256 --lr 1e-4 --steps 5000 --eval-every 250"
                            " --stop-map 0.95 --stop-fp-score 0.5 --deterministic --seed 0");
  const std::string checkpoint = field(train, "checkpoint");
  const std::string steps = field(train, "steps");

  const std::string infer_args = "infer --deterministic --checkpoint " + checkpoint + " --video " + v1.string() + "," +
                                 v2.string();
  const fs::path run_a = field(cli.ok(infer_args), "run_dir");
  const fs::path run_b = field(cli.ok(infer_args), "run_dir");

  OverfitResults out;

  const auto report = nlohmann::json::parse(
      slurp(fs::path(field(cli.ok("eval --detections " + run_a.string() + " --annotations " + v1.string() + "," +
                                  v2.string()),
                           "run_dir")) /
            "report.json"));
  const double map50 = report.at("main").at("map").get<double>();
  out.overfit = verdict(map50 >= 0.9, "v4 lags 1,3 at 256, steps " + steps + ", training-frame mAP50 " +
                                          fmt(map50) + " (>= 0.9)");

  // Movers-only check on S2: sprite 0 moves, sprite 1 is its static twin.
  const auto video = synth::generate_video(s2);
  const auto dets = inference::read_detections(run_a / "detections" / (s2.name + ".txt"));
  const auto meta = nlohmann::json::parse(slurp(run_a / "detections" / (s2.name + ".json")));
  const auto first = meta.at("first_frame").get<std::int64_t>(), last = meta.at("last_frame").get<std::int64_t>();
  int static_idx = -1, mover_idx = -1;
  for (std::size_t i = 0; i < s2.sprites.size(); ++i) {
    (s2.sprites[i].trajectory.kind == synth::Trajectory::Kind::Static ? static_idx : mover_idx) = static_cast<int>(i);
  }
  const auto& still = s2.sprites[static_cast<std::size_t>(static_idx)];
  int hits = 0, processed = 0, on_distractor = 0;
  for (std::int64_t t = first; t <= last; ++t) {
    ++processed;
    const auto p = synth::sprite_position(s2, still, static_cast<int>(t));
    const BoundingBox distractor{double(p.x), double(p.y), double(p.x + still.width), double(p.y + still.height)};
    bool found = false;
    for (const auto& d : dets) {
      if (d.frame_index != t || d.score < 0.5) continue;
      if (iou(d.box, distractor) >= 0.5) ++on_distractor;
      for (const auto& g : video.sequence.annotations) {
        if (g.frame_index == t && g.label == d.label && iou(d.box, g.box) >= 0.5) found = true;
      }
    }
    hits += found;
  }
  const double rate = processed ? static_cast<double>(hits) / processed : 0.0;
  out.discrimination = verdict(mover_idx >= 0 && processed > 0 && on_distractor == 0 && rate >= 0.9,
                               "S2 frames " + std::to_string(first) + "-" + std::to_string(last) +
                                   ": mover detected in " + std::to_string(hits) + "/" + std::to_string(processed) +
                                   " (>= 90%), detections >= 0.5 on the static twin " +
                                   std::to_string(on_distractor) + " (must be 0)");

  bool identical = run_a != run_b;
  std::size_t bytes = 0;
  for (const auto& name : {s1.name, s2.name}) {
    const auto rel = fs::path("detections") / (name + ".txt");
    const auto a = slurp(run_a / rel), b = slurp(run_b / rel);
    identical = identical && !a.empty() && a == b;
    bytes += a.size();
  }
  out.determinism = verdict(identical, "two deterministic infer runs, " + std::to_string(bytes) +
                                           " bytes of detections, byte-identical: " + (identical ? "yes" : "no"));
  fs::remove_all(root);
  return out;
}

// ---------------------------------------------------------------- 8

Outcome online_contract() {
  const std::vector<int> lags{1, 3, 5};
  torch::manual_seed(1);
  detector::ModelOptions o;
  o.variant = detector::make_variant(detector::Version::V4, lags);
  o.input_size = {96, 96};
  flow::FlowConfig fc;
  fc.lags = lags;
  const inference::Detector det(detector::build_model(o), {}, fc);

  synth::SynthSceneSpec spec;
  spec.canvas = {96, 96};
  spec.n_frames = 14;
  synth::SpriteSpec s;
  s.width = 12;
  s.height = 8;
  s.origin = {10, 40};
  s.trajectory = synth::Trajectory::linear(2, 0);
  spec.sprites = {s};
  const auto video = synth::generate_video(spec).sequence;

  flow::FrameRingBuffer buffer(16);
  int warmup_raised = 0, exact = 0, checked = 0;
  std::vector<std::int64_t> reads;
  buffer.set_access_observer([&](std::int64_t i) { reads.push_back(i); });
  for (std::int64_t t = 0; t < 14; ++t) {
    buffer.push(video.frame(static_cast<std::size_t>(t)));
    reads.clear();
    try {
      (void)det.infer_frame(buffer, t);
      if (t < 5) continue;
      ++checked;
      const std::set<std::int64_t> seen(reads.begin(), reads.end()), want{t, t - 1, t - 3, t - 5};
      exact += seen == want;
    } catch (const NotEnoughHistory&) {
      warmup_raised += t < 5;
    }
  }
  return verdict(warmup_raised == 5 && checked == 9 && exact == checked,
                 "lags 1,3,5: warm-up frames raising NotEnoughHistory " + std::to_string(warmup_raised) +
                     "/5, frames reading exactly {t, t-1, t-3, t-5} " + std::to_string(exact) + "/" +
                     std::to_string(checked));
}

// ---------------------------------------------------------------- 9

Outcome iou_sweep_shape() {
  const auto spec = synth::standard_suite("s3");
  const auto video = synth::generate_video(spec).sequence;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0), score(0.3, 1.0);
  std::vector<Detection> dets;
  for (const auto& g : video.annotations) {
    const double dx = jitter(rng), dy = jitter(rng), dw = jitter(rng), dh = jitter(rng);
    dets.push_back({{g.box.x1 + dx, g.box.y1 + dy, g.box.x2 + dx + dw, g.box.y2 + dy + dh}, g.label, score(rng),
                    g.frame_index});
  }
  const auto sweep = eval::iou_sweep(dets, video.annotations);
  bool monotone = true;
  std::string series;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (i > 0) monotone = monotone && sweep[i].map_value <= sweep[i - 1].map_value;
    series += (i ? " " : "") + fmt(sweep[i].map_value, 3);
  }
  return verdict(monotone && sweep.size() == 7 && sweep.back().map_value < sweep.front().map_value,
                 "jittered S3 detections, mAP at 0.2..0.8: " + series);
}

// ---------------------------------------------------------------- 11

Outcome real_dataset_stats() {
  const char* env = std::getenv("MOR_UAV_ROOT");
  if (!env || !*env || !fs::exists(env)) return {Outcome::Status::Skip, "MOR_UAV_ROOT not set or missing"};
  const fs::path root = fs::temp_directory_path() / "mor_acceptance_stats";
  const Cli cli{root};
  const fs::path run = field(cli.ok(std::string("stats --dataset ") + env), "run_dir");
  std::map<std::string, std::string> s;
  std::istringstream in(slurp(run / "stats.tsv"));
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos) s[line.substr(0, tab)] = line.substr(tab + 1);
  }
  fs::remove_all(root);
  const std::pair<const char*, double> want[] = {
      {"n_instances", 89783},    {"count_car", 80340},    {"count_heavy_vehicle", 9443},
      {"bb_height_mean", 29.011}, {"bb_height_min", 6},     {"bb_height_max", 181},
      {"bb_width_mean", 17.641},  {"bb_width_min", 6},      {"bb_width_max", 106},
      {"seq_length_mean", 364.93}, {"seq_length_min", 64}, {"seq_length_max", 1146}};
  std::string wrong;
  for (const auto& [key, value] : want) {
    const auto it = s.find(key);
    const double got = it == s.end() ? NAN : std::stod(it->second);
    // Published means carry three decimals at most.
    if (!(std::abs(got - value) <= 5e-4)) wrong += std::string(key) + "=" + (it == s.end() ? "?" : it->second) + " ";
  }
  return verdict(wrong.empty(), wrong.empty() ? "all 12 published statistics match" : "mismatch: " + wrong);
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::string>> names = {
      {1, "parameter counts"},      {2, "loss correctness"},   {3, "geometry and scoring oracles"},
      {4, "perfect detector"},      {5, "flow fidelity"},      {6, "overfit capability"},
      {7, "moving-only discrimination"}, {8, "online contract"}, {9, "IoU sweep shape"},
      {10, "determinism"},          {11, "real dataset statistics"}};

  std::map<int, Outcome> results;
  auto guarded = [](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return fail(std::string("exception: ") + e.what());
    }
  };
  results[1] = guarded(parameter_counts);
  results[2] = guarded(loss_correctness);
  results[3] = guarded(geometry_oracles);
  results[4] = guarded(perfect_detector);
  results[5] = guarded(flow_fidelity);
  results[8] = guarded(online_contract);
  results[9] = guarded(iou_sweep_shape);
  results[11] = guarded(real_dataset_stats);
  try {
    const auto o = overfit_pipeline();
    results[6] = o.overfit;
    results[7] = o.discrimination;
    results[10] = o.determinism;
  } catch (const std::exception& e) {
    std::string first_line = e.what();
    first_line = first_line.substr(0, first_line.find('\n'));
    for (int c : {6, 7, 10}) results[c] = fail("pipeline error: " + first_line);
  }

  int failed = 0;
  for (const auto& [id, name] : names) {
    const auto& r = results.at(id);
    const char* tag = r.status == Outcome::Status::Pass ? "PASS" : r.status == Outcome::Status::Skip ? "SKIP" : "FAIL";
    failed += r.status == Outcome::Status::Fail;
    std::cout << "criterion " << std::setw(2) << id << " " << tag << "  " << name << ": " << r.detail << std::endl;
  }
  return failed ? 1 : 0;
}
