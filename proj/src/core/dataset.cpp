#include "mor/core/dataset.hpp"

#include <algorithm>
#include <cstdio>

#include <opencv2/imgcodecs.hpp>

#include "mor/error.hpp"

namespace fs = std::filesystem;

namespace mor {

std::string frame_stem(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06lld", static_cast<long long>(index));
  return buf;
}

VideoSequence load_video_dir(const fs::path& dir, AnnotationFormat format, double fps) {
  const auto frames_dir = dir / "frames";
  if (!fs::is_directory(frames_dir)) throw Error("missing frames directory: " + frames_dir.string());

  VideoSequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  seq.fps = fps;
  for (const auto& entry : fs::directory_iterator(frames_dir)) {
    if (entry.is_regular_file()) seq.frame_paths.push_back(entry.path());
  }
  std::sort(seq.frame_paths.begin(), seq.frame_paths.end());
  if (seq.frame_paths.empty()) throw Error("no frames in " + frames_dir.string());

  for (std::size_t i = 0; i < seq.frame_paths.size(); ++i) {
    if (seq.frame_paths[i].stem().string() != frame_stem(static_cast<std::int64_t>(i))) {
      throw Error("frame files are not contiguous from 000000 in " + frames_dir.string() +
                  " (unexpected " + seq.frame_paths[i].filename().string() + ")");
    }
  }

  const cv::Mat first = cv::imread(seq.frame_paths.front().string(), cv::IMREAD_COLOR);
  if (first.empty()) throw Error("cannot decode " + seq.frame_paths.front().string());
  seq.frame_size = first.size();

  const auto labels_dir = dir / "labels";
  for (std::size_t i = 0; i < seq.frame_paths.size(); ++i) {
    const auto label_path = labels_dir / (frame_stem(static_cast<std::int64_t>(i)) + ".txt");
    if (!fs::exists(label_path)) continue;
    auto inst = parse_annotations(label_path, format, static_cast<std::int64_t>(i), seq.frame_size);
    seq.annotations.insert(seq.annotations.end(), inst.begin(), inst.end());
  }
  seq.validate();
  return seq;
}

std::vector<VideoSequence> load_dataset(const fs::path& root, AnnotationFormat format) {
  if (fs::is_directory(root / "frames")) return {load_video_dir(root, format)};
  if (!fs::is_directory(root)) throw Error("dataset root is not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::is_directory(entry.path() / "frames")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<VideoSequence> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(load_video_dir(d, format));
  return out;
}

void save_video_dir(const VideoSequence& seq, const fs::path& dir) {
  fs::create_directories(dir / "frames");
  fs::create_directories(dir / "labels");
  for (std::size_t i = 0; i < seq.length(); ++i) {
    const auto rec = seq.frame(i);
    const auto stem = frame_stem(static_cast<std::int64_t>(i));
    if (!cv::imwrite((dir / "frames" / (stem + ".png")).string(), rec.pixels)) {
      throw Error("cannot write frame " + stem + " under " + dir.string());
    }
    write_annotations(dir / "labels" / (stem + ".txt"),
                      seq.annotations_at(static_cast<std::int64_t>(i)), AnnotationFormat::Corner);
  }
}

}  // namespace mor
