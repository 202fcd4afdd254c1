#pragma once

#include <filesystem>
#include <vector>

#include "mor/core/annotations.hpp"
#include "mor/core/types.hpp"

namespace mor {

// On-disk layout, one directory per video:
//   <root>/<video>/frames/000000.png ...
//   <root>/<video>/labels/000000.txt ...   (corner format unless stated)
// A missing label file means "no moving objects in that frame".

/// Indexes one video directory. Frames stay on disk; only the first frame is
/// decoded to learn the frame size.
[[nodiscard]] VideoSequence load_video_dir(const std::filesystem::path& dir,
                                           AnnotationFormat format = AnnotationFormat::Corner,
                                           double fps = kDefaultFps);

/// Loads every video directory under `root`, sorted by name. A `root` that is
/// itself a video directory (contains frames/) yields a single sequence.
[[nodiscard]] std::vector<VideoSequence> load_dataset(
    const std::filesystem::path& root, AnnotationFormat format = AnnotationFormat::Corner);

/// Writes frames and corner-format labels for every frame of `seq` under `dir`.
void save_video_dir(const VideoSequence& seq, const std::filesystem::path& dir);

[[nodiscard]] std::string frame_stem(std::int64_t index);

}  // namespace mor
