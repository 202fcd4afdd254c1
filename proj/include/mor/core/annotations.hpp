#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "mor/core/types.hpp"

namespace mor {

enum class AnnotationFormat {
  /// `<x1> <y1> <x2> <y2> <class_id>` in pixels.
  Corner,
  /// Yolo-mark style `<class_id> <cx> <cy> <w> <h>`, all normalized to [0, 1].
  NormalizedCenter,
};

[[nodiscard]] AnnotationFormat annotation_format_from_string(std::string_view s);

/// Parses the text of one per-frame annotation file.
///
/// Blank lines and lines starting with '#' are skipped. `frame_size` is only
/// consulted for the normalized-center format. Every returned box is valid;
/// malformed or degenerate records raise ParseError with the 1-based line.
[[nodiscard]] std::vector<MovingObjectInstance> parse_annotation_text(
    std::string_view text, AnnotationFormat format, std::int64_t frame_index,
    cv::Size frame_size = {});

[[nodiscard]] std::vector<MovingObjectInstance> parse_annotations(
    const std::filesystem::path& path, AnnotationFormat format, std::int64_t frame_index,
    cv::Size frame_size = {});

/// Serializes instances (all assumed to belong to one frame). Coordinates use
/// the shortest decimal form that round-trips exactly.
[[nodiscard]] std::string format_annotations(const std::vector<MovingObjectInstance>& instances,
                                             AnnotationFormat format, cv::Size frame_size = {});

void write_annotations(const std::filesystem::path& path,
                       const std::vector<MovingObjectInstance>& instances, AnnotationFormat format,
                       cv::Size frame_size = {});

}  // namespace mor
