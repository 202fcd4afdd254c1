#include "mor/eval/average_precision.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mor/core/geometry.hpp"
#include "mor/error.hpp"

namespace mor::eval {

APResult average_precision(const std::vector<Detection>& detections,
                           const std::vector<MovingObjectInstance>& ground_truth,
                           double iou_threshold, ClassLabel label) {
  APResult result;
  result.curve.label = label;
  result.curve.iou_threshold = iou_threshold;

  std::unordered_map<std::int64_t, std::vector<std::size_t>> gt_by_frame;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (ground_truth[i].label != label) continue;
    gt_by_frame[ground_truth[i].frame_index].push_back(i);
    ++result.n_gt;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].label == label) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::vector<bool> matched(ground_truth.size(), false);
  std::size_t tp = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& det = detections[order[rank]];
    double best = -1.0;
    std::size_t best_gt = 0;
    if (auto it = gt_by_frame.find(det.frame_index); it != gt_by_frame.end()) {
      for (std::size_t g : it->second) {
        if (matched[g]) continue;
        const double v = iou(det.box, ground_truth[g].box);
        if (v >= iou_threshold && v > best) {
          best = v;
          best_gt = g;
        }
      }
    }
    if (best >= 0.0) {
      matched[best_gt] = true;
      ++tp;
    }
    result.curve.precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
    result.curve.recall.push_back(result.n_gt ? static_cast<double>(tp) / result.n_gt : 0.0);
  }
  result.true_positives = tp;
  if (result.n_gt == 0) return result;

  // All-point interpolation: precision envelope, integrated over recall steps.
  const auto& rec = result.curve.recall;
  std::vector<double> envelope = result.curve.precision;
  for (std::size_t i = envelope.size(); i-- > 1;) envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (rec[i] > prev_recall) {
      result.ap += (rec[i] - prev_recall) * envelope[i];
      prev_recall = rec[i];
    }
  }
  return result;
}

APResult average_precision(const std::vector<Detection>& detections,
                           const std::vector<MovingObjectInstance>& ground_truth,
                           double iou_threshold, int class_id) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw Error("unknown class id " + std::to_string(class_id));
  }
  return average_precision(detections, ground_truth, iou_threshold, static_cast<ClassLabel>(class_id));
}

EvalReport map_at_iou(const std::vector<Detection>& detections,
                      const std::vector<MovingObjectInstance>& ground_truth, double iou_threshold) {
  if (ground_truth.empty()) throw Error("mAP is undefined without ground truth");
  EvalReport report;
  report.iou_threshold = iou_threshold;
  double sum = 0.0;
  int present = 0;
  for (auto c : kAllClasses) {
    const bool has_gt = std::any_of(ground_truth.begin(), ground_truth.end(),
                                    [c](const MovingObjectInstance& g) { return g.label == c; });
    if (!has_gt) {
      report.absent_classes.push_back(c);
      continue;
    }
    const double ap = average_precision(detections, ground_truth, iou_threshold, c).ap;
    report.per_class_ap[c] = ap;
    sum += ap;
    ++present;
  }
  report.map_value = sum / present;
  return report;
}

std::vector<EvalReport> iou_sweep(const std::vector<Detection>& detections,
                                  const std::vector<MovingObjectInstance>& ground_truth,
                                  const std::vector<double>& thresholds) {
  std::vector<EvalReport> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) out.push_back(map_at_iou(detections, ground_truth, t));
  return out;
}

std::size_t discard_outside(std::vector<Detection>& detections, cv::Size frame) {
  const auto before = detections.size();
  std::erase_if(detections, [&](const Detection& d) {
    return outside_frame(d.box, frame.width, frame.height);
  });
  return before - detections.size();
}

EvalReport evaluate_videos(std::vector<VideoResults> videos, double iou_threshold,
                           std::size_t* discarded) {
  std::size_t dropped = 0;
  std::vector<Detection> pooled_dets;
  std::vector<MovingObjectInstance> pooled_gt;
  std::map<std::string, VideoScore> per_video;
  std::int64_t offset = 0;
  for (auto& v : videos) {
    if (v.frame_size.width > 0) dropped += discard_outside(v.detections, v.frame_size);
    if (!v.ground_truth.empty()) {
      const auto r = map_at_iou(v.detections, v.ground_truth, iou_threshold);
      per_video[v.name] = {r.per_class_ap, r.map_value};
    }
    // Frame keys are offset so frames of different videos never match each other.
    std::int64_t span = 0;
    for (const auto& d : v.detections) span = std::max(span, d.frame_index + 1);
    for (const auto& g : v.ground_truth) span = std::max(span, g.frame_index + 1);
    for (auto d : v.detections) {
      d.frame_index += offset;
      pooled_dets.push_back(d);
    }
    for (auto g : v.ground_truth) {
      g.frame_index += offset;
      pooled_gt.push_back(g);
    }
    offset += span;
  }
  auto report = map_at_iou(pooled_dets, pooled_gt, iou_threshold);
  report.per_video = std::move(per_video);
  if (!report.per_video.empty()) {
    double sum = 0.0;
    for (const auto& [name, score] : report.per_video) sum += score.map_value;
    report.video_average = sum / static_cast<double>(report.per_video.size());
  }
  if (discarded) *discarded = dropped;
  return report;
}

}  // namespace mor::eval
