#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mor/core/types.hpp"
#include "mor/inference/detection.hpp"

namespace mor::eval {

using inference::Detection;

/// Precision/recall after each ranked detection of one class.
struct PRCurve {
  ClassLabel label{ClassLabel::Car};
  double iou_threshold{0.5};
  std::vector<double> recall;
  std::vector<double> precision;
};

struct APResult {
  double ap{0.0};
  PRCurve curve;
  std::size_t n_gt{0};
  std::size_t true_positives{0};
};

/// AP of one class at one IoU threshold, all-point interpolated.
///
/// Detections are ranked by descending score (stable). Each detection is matched
/// to the highest-IoU ground truth of the same class and frame that is still
/// unmatched and has IoU >= threshold; otherwise it is a false positive. AP is
/// 0 when no ground truth of the class exists.
[[nodiscard]] APResult average_precision(const std::vector<Detection>& detections,
                                         const std::vector<MovingObjectInstance>& ground_truth,
                                         double iou_threshold, ClassLabel label);
/// Overload taking a raw class id; throws Error for ids outside the label set.
[[nodiscard]] APResult average_precision(const std::vector<Detection>& detections,
                                         const std::vector<MovingObjectInstance>& ground_truth,
                                         double iou_threshold, int class_id);

struct VideoScore {
  std::map<ClassLabel, double> per_class_ap;
  double map_value{0.0};
};

struct EvalReport {
  double iou_threshold{0.5};
  std::map<ClassLabel, double> per_class_ap;
  /// Mean over classes present in the ground truth.
  double map_value{0.0};
  /// Classes without ground truth, excluded from the mean.
  std::vector<ClassLabel> absent_classes;
  /// Optional per-video scores (Table-style breakdown) and their unweighted mean.
  std::map<std::string, VideoScore> per_video;
  std::optional<double> video_average;
};

/// mAP over the classes present in `ground_truth`. Throws Error when it is empty.
[[nodiscard]] EvalReport map_at_iou(const std::vector<Detection>& detections,
                                    const std::vector<MovingObjectInstance>& ground_truth,
                                    double iou_threshold);

inline const std::vector<double> kDefaultSweep{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

[[nodiscard]] std::vector<EvalReport> iou_sweep(const std::vector<Detection>& detections,
                                                const std::vector<MovingObjectInstance>& ground_truth,
                                                const std::vector<double>& thresholds = kDefaultSweep);

/// Detections and ground truth of one video, with its frame size.
struct VideoResults {
  std::string name;
  cv::Size frame_size;
  std::vector<Detection> detections;
  std::vector<MovingObjectInstance> ground_truth;
};

/// Drops detections lying entirely outside the frame; returns how many were dropped.
std::size_t discard_outside(std::vector<Detection>& detections, cv::Size frame);

/// Scores every video independently (filled into `per_video`, averaged without
/// weighting into `video_average`) and also scores the pooled ranking over all
/// videos (`per_class_ap`, `map_value`). Videos without ground truth are skipped
/// in the per-video breakdown.
[[nodiscard]] EvalReport evaluate_videos(std::vector<VideoResults> videos, double iou_threshold,
                                         std::size_t* discarded = nullptr);

}  // namespace mor::eval
