#pragma once

#include <map>
#include <string>
#include <vector>

#include "mor/core/types.hpp"

namespace mor {

struct SummaryStats {
  double mean{0.0};
  double min{0.0};
  double max{0.0};
};

struct DatasetStats {
  std::size_t n_videos{0};
  std::size_t n_frames{0};
  std::size_t n_instances{0};
  std::map<ClassLabel, std::size_t> per_class_counts;
  SummaryStats bb_height;
  SummaryStats bb_width;
  SummaryStats seq_length;
};

/// Summarizes a dataset. Box extents are measured after rescaling each video
/// to `normalized_size` x `normalized_size`; pass 0 to measure native pixels.
/// Throws Error on an empty dataset. Box statistics are zero when no instance exists.
[[nodiscard]] DatasetStats compute_dataset_stats(const std::vector<VideoSequence>& sequences,
                                                 int normalized_size = 608);

/// `key: value` lines.
[[nodiscard]] std::string format_stats_text(const DatasetStats& stats);
/// Two-column TSV (`key\tvalue`) with a header row.
[[nodiscard]] std::string format_stats_tsv(const DatasetStats& stats);

}  // namespace mor
