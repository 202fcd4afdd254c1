#include "mor/core/annotations.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mor/error.hpp"

namespace mor {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> split_numbers(std::string_view line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    auto end = line.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = line.size();
    const auto tok = line.substr(pos, end - pos);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      throw ParseError("non-numeric field '" + std::string(tok) + "'", lineno);
    }
    out.push_back(v);
    pos = end;
  }
  return out;
}

ClassLabel parse_class(double v, std::size_t lineno) {
  const int id = static_cast<int>(v);
  if (static_cast<double>(id) != v || id < 0 || id >= kNumClasses) {
    throw ParseError("invalid class id", lineno);
  }
  return static_cast<ClassLabel>(id);
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

AnnotationFormat annotation_format_from_string(std::string_view s) {
  if (s == "corner") return AnnotationFormat::Corner;
  if (s == "normalized-center" || s == "yolo") return AnnotationFormat::NormalizedCenter;
  throw ConfigError("unknown annotation format '" + std::string(s) + "'");
}

std::vector<MovingObjectInstance> parse_annotation_text(std::string_view text,
                                                        AnnotationFormat format,
                                                        std::int64_t frame_index,
                                                        cv::Size frame_size) {
  if (format == AnnotationFormat::NormalizedCenter &&
      (frame_size.width <= 0 || frame_size.height <= 0)) {
    throw ParseError("normalized-center annotations need the frame size");
  }
  std::vector<MovingObjectInstance> out;
  std::size_t lineno = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_numbers(line, lineno);
    if (f.size() != 5) {
      throw ParseError("expected 5 fields, got " + std::to_string(f.size()), lineno);
    }
    MovingObjectInstance inst;
    inst.frame_index = frame_index;
    if (format == AnnotationFormat::Corner) {
      inst.box = {f[0], f[1], f[2], f[3]};
      inst.label = parse_class(f[4], lineno);
    } else {
      inst.label = parse_class(f[0], lineno);
      for (int i = 1; i < 5; ++i) {
        if (!(f[i] >= 0.0 && f[i] <= 1.0)) throw ParseError("normalized value outside [0,1]", lineno);
      }
      const double W = frame_size.width;
      const double H = frame_size.height;
      const double cx = f[1] * W, cy = f[2] * H, hw = 0.5 * f[3] * W, hh = 0.5 * f[4] * H;
      inst.box = {cx - hw, cy - hh, cx + hw, cy + hh};
    }
    if (!inst.box.is_valid()) {
      throw ParseError("degenerate box (zero or negative extent)", lineno);
    }
    out.push_back(inst);
  }
  return out;
}

std::vector<MovingObjectInstance> parse_annotations(const std::filesystem::path& path,
                                                    AnnotationFormat format,
                                                    std::int64_t frame_index, cv::Size frame_size) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_annotation_text(ss.str(), format, frame_index, frame_size);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_annotations(const std::vector<MovingObjectInstance>& instances,
                               AnnotationFormat format, cv::Size frame_size) {
  std::string out;
  for (const auto& inst : instances) {
    const auto& b = inst.box;
    if (format == AnnotationFormat::Corner) {
      out += num(b.x1) + ' ' + num(b.y1) + ' ' + num(b.x2) + ' ' + num(b.y2) + ' ' +
             std::to_string(class_id(inst.label)) + '\n';
    } else {
      const double W = frame_size.width;
      const double H = frame_size.height;
      if (W <= 0 || H <= 0) throw Error("normalized-center export needs the frame size");
      out += std::to_string(class_id(inst.label)) + ' ' + num(b.center_x() / W) + ' ' +
             num(b.center_y() / H) + ' ' + num(b.width() / W) + ' ' + num(b.height() / H) + '\n';
    }
  }
  return out;
}

void write_annotations(const std::filesystem::path& path,
                       const std::vector<MovingObjectInstance>& instances, AnnotationFormat format,
                       cv::Size frame_size) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write annotation file " + path.string());
  out << format_annotations(instances, format, frame_size);
}

}  // namespace mor
