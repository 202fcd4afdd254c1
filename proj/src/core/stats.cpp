#include "mor/core/stats.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "mor/error.hpp"

namespace mor {
namespace {

class Accumulator {
 public:
  void add(double v) {
    sum_ += v;
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
    ++n_;
  }
  [[nodiscard]] SummaryStats result() const {
    if (n_ == 0) return {};
    return {sum_ / static_cast<double>(n_), min_, max_};
  }

 private:
  double sum_{0.0};
  double min_{std::numeric_limits<double>::infinity()};
  double max_{-std::numeric_limits<double>::infinity()};
  std::size_t n_{0};
};

void put(std::ostringstream& os, const char* key, const SummaryStats& s, const char* sep) {
  os << key << "_mean" << sep << s.mean << '\n'
     << key << "_min" << sep << s.min << '\n'
     << key << "_max" << sep << s.max << '\n';
}

std::string format_with(const DatasetStats& st, const char* sep) {
  std::ostringstream os;
  os.precision(10);
  os << "n_videos" << sep << st.n_videos << '\n'
     << "n_frames" << sep << st.n_frames << '\n'
     << "n_instances" << sep << st.n_instances << '\n';
  for (auto c : kAllClasses) {
    const auto it = st.per_class_counts.find(c);
    os << "count_" << class_name(c) << sep << (it == st.per_class_counts.end() ? 0 : it->second)
       << '\n';
  }
  put(os, "bb_height", st.bb_height, sep);
  put(os, "bb_width", st.bb_width, sep);
  put(os, "seq_length", st.seq_length, sep);
  return os.str();
}

}  // namespace

DatasetStats compute_dataset_stats(const std::vector<VideoSequence>& sequences,
                                   int normalized_size) {
  if (sequences.empty()) throw Error("cannot compute statistics of an empty dataset");
  DatasetStats st;
  Accumulator heights, widths, lengths;
  for (auto c : kAllClasses) st.per_class_counts[c] = 0;
  for (const auto& seq : sequences) {
    ++st.n_videos;
    st.n_frames += seq.length();
    lengths.add(static_cast<double>(seq.length()));
    double sx = 1.0, sy = 1.0;
    if (normalized_size > 0) {
      if (seq.frame_size.width <= 0 || seq.frame_size.height <= 0) {
        throw Error(seq.name + ": frame size unknown, cannot normalize boxes");
      }
      sx = static_cast<double>(normalized_size) / seq.frame_size.width;
      sy = static_cast<double>(normalized_size) / seq.frame_size.height;
    }
    for (const auto& a : seq.annotations) {
      ++st.n_instances;
      ++st.per_class_counts[a.label];
      heights.add(a.box.height() * sy);
      widths.add(a.box.width() * sx);
    }
  }
  st.bb_height = heights.result();
  st.bb_width = widths.result();
  st.seq_length = lengths.result();
  return st;
}

std::string format_stats_text(const DatasetStats& stats) { return format_with(stats, ": "); }

std::string format_stats_tsv(const DatasetStats& stats) {
  return "key\tvalue\n" + format_with(stats, "\t");
}

}  // namespace mor
