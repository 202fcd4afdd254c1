// mor: train, run and score moving-object recognition models.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "mor/config/run_config.hpp"
#include "mor/core/dataset.hpp"
#include "mor/core/stats.hpp"
#include "mor/detector/checkpoint.hpp"
#include "mor/detector/runtime.hpp"
#include "mor/error.hpp"
#include "mor/eval/average_precision.hpp"
#include "mor/eval/report.hpp"
#include "mor/flow/ring_buffer.hpp"
#include "mor/inference/infer.hpp"
#include "mor/inference/overlay.hpp"
#include "mor/synth/synth.hpp"
#include "mor/training/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Settings that can come from flags; unset ones fall through to the config file.
struct CommonFlags {
  std::string config_file;
  std::string runs_dir;
  std::string variant;
  std::string lags;
  std::string input_size;
  std::optional<std::uint64_t> seed;
  bool allow_any_lags{false};
  bool deterministic{false};
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "JSON config file (comments allowed)");
  cmd->add_option("--runs-dir", f.runs_dir, "Parent directory for run outputs");
  cmd->add_option("--variant", f.variant, "Model variant: v1, v2, v3 or v4");
  cmd->add_option("--lags", f.lags, "Comma-separated flow lags, e.g. 1,3,5");
  cmd->add_option("--input-size", f.input_size, "Model input size: N or WxH");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_flag("--allow-any-lags", f.allow_any_lags, "Accept unsupported lag sets");
  cmd->add_flag("--deterministic", f.deterministic, "Deterministic kernels, single thread");
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw mor::ConfigError(std::string("invalid ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw mor::ConfigError(std::string("empty ") + what);
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw mor::ConfigError(std::string("invalid ") + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw mor::ConfigError(std::string("empty ") + what);
  return out;
}

cv::Size parse_size(const std::string& text) {
  const auto x = text.find('x');
  const auto parts = x == std::string::npos ? parse_int_list(text, "input size")
                                            : std::vector<int>{parse_int_list(text.substr(0, x), "input size")[0],
                                                               parse_int_list(text.substr(x + 1), "input size")[0]};
  return parts.size() == 1 ? cv::Size(parts[0], parts[0]) : cv::Size(parts[0], parts[1]);
}

/// Defaults, then `base` (e.g. a checkpoint's config), then the config file, then flags.
mor::config::RunConfig resolve_config(const CommonFlags& f, std::optional<json> base = std::nullopt) {
  mor::config::RunConfig cfg;
  if (base) cfg = mor::config::from_json(*base, cfg);
  if (!f.config_file.empty()) cfg = mor::config::load_config_file(f.config_file, cfg);
  if (f.allow_any_lags) cfg.allow_any_lags = true;
  if (!f.lags.empty()) {
    cfg.flow.lags = parse_int_list(f.lags, "lags");
    cfg.model.variant.lags = cfg.flow.lags;
  }
  if (!f.variant.empty()) {
    const auto keep = cfg.model.variant.backbone;
    cfg.model.variant = mor::detector::make_variant(mor::detector::version_from_string(f.variant), cfg.flow.lags);
    cfg.model.variant.backbone.pretrained = keep.pretrained;
    cfg.model.variant.backbone.weights = keep.weights;
  }
  if (!f.input_size.empty()) cfg.model.input_size = parse_size(f.input_size);
  if (f.seed) cfg.train.seed = *f.seed;
  if (f.deterministic) cfg.train.deterministic = true;
  if (!f.runs_dir.empty()) cfg.runs_dir = f.runs_dir;
  cfg.finalize();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mor::Error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw mor::Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw mor::ParseError(path.string() + ": " + e.what(), 0);
  }
}

fs::path start_run(const mor::config::RunConfig& cfg, const std::string& command) {
  const auto dir = mor::config::create_run_dir(cfg, command);
  write_json(dir / "config.json", mor::config::to_json(cfg));
  std::cout << "run_dir " << dir.string() << "\n";
  return dir;
}

void apply_determinism(const mor::config::RunConfig& cfg) {
  if (cfg.train.deterministic) {
    mor::detector::enable_determinism(cfg.train.seed);
    cv::setNumThreads(1);
  } else {
    torch::manual_seed(cfg.train.seed);
  }
}

std::vector<mor::VideoSequence> load_videos(const std::vector<std::string>& roots) {
  std::vector<mor::VideoSequence> out;
  for (const auto& r : roots) {
    auto v = mor::load_dataset(r);
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  if (out.empty()) throw mor::Error("no videos found");
  return out;
}

// ---------------------------------------------------------------- synth

int cmd_synth(const CommonFlags& f, const std::vector<std::string>& suites, int frames, const std::string& size) {
  auto cfg = resolve_config(f);
  const cv::Size canvas = size.empty() ? cv::Size(256, 256) : parse_size(size);
  std::vector<mor::synth::SynthSceneSpec> specs;
  if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) {
    specs = mor::synth::standard_suites(canvas, frames);
  } else {
    for (const auto& s : suites) specs.push_back(mor::synth::standard_suite(s, canvas, frames));
  }
  for (const auto& spec : specs) mor::synth::validate_spec(spec);
  const auto run = start_run(cfg, "synth");
  for (const auto& spec : specs) {
    const auto video = mor::synth::generate_video(spec);
    mor::save_video_dir(video.sequence, run / "data" / spec.name);
    std::cout << spec.name << ": " << video.sequence.length() << " frames, " << video.sequence.annotations.size()
              << " instances\n";
  }
  return 0;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const CommonFlags& f, const std::vector<std::string>& datasets, int normalized) {
  auto cfg = resolve_config(f);
  const auto videos = load_videos(datasets);
  const auto stats = mor::compute_dataset_stats(videos, normalized);
  const auto run = start_run(cfg, "stats");
  write_text(run / "stats.txt", mor::format_stats_text(stats));
  write_text(run / "stats.tsv", mor::format_stats_tsv(stats));
  std::cout << mor::format_stats_text(stats);
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainFlags {
  std::vector<std::string> datasets;
  std::optional<double> lr;
  std::optional<std::int64_t> steps;
  std::optional<std::int64_t> checkpoint_every;
  std::optional<std::int64_t> log_every;
  std::string resume;
  std::int64_t eval_every{0};
  double stop_map{0.0};
  double stop_fp_score{1.0};
  bool hflip{false};
};

int cmd_train(const CommonFlags& f, const TrainFlags& t) {
  auto cfg = resolve_config(f);
  if (t.lr) cfg.train.learning_rate = *t.lr;
  if (t.steps) cfg.train.max_iterations = *t.steps;
  if (t.checkpoint_every) cfg.train.checkpoint_every = *t.checkpoint_every;
  if (t.log_every) cfg.train.log_every = *t.log_every;
  if (t.hflip) cfg.train.horizontal_flip = true;
  cfg.finalize();
  apply_determinism(cfg);
  const auto device = mor::detector::device_from_env();

  const auto videos = load_videos(t.datasets);
  const auto run = start_run(cfg, "train");
  const mor::detector::ModelOptions options{cfg.model.variant, cfg.model.anchors, cfg.model.head,
                                            cfg.model.input_size};
  const auto norm = mor::training::normalization_for(cfg.model.variant.backbone.family);
  const auto samples = mor::training::prepare_samples(videos, cfg.flow, cfg.model.input_size, norm);
  std::cout << "variant " << cfg.model.variant.tag() << ", " << samples.size() << " samples\n";

  mor::training::Trainer trainer(mor::detector::build_model(options), cfg.train, device);
  if (!t.resume.empty()) trainer.resume(t.resume);
  std::cout << "parameters " << trainer.model()->parameter_count() << "\n";

  const json cfg_json = mor::config::to_json(cfg);
  fs::create_directories(run / "checkpoints");
  std::ofstream log(run / "metrics.jsonl");
  json last_metrics = json::object();
  bool stopped = false;

  const auto checkpoint_name = [](std::int64_t step) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "step_%07lld.pt", static_cast<long long>(step));
    return std::string(buf);
  };

  while (trainer.step() < cfg.train.max_iterations && !stopped) {
    const auto& s = samples[trainer.sample_index(trainer.step(), samples.size())];
    const auto loss = trainer.train_step(s);
    const auto step = trainer.step();
    if (step % cfg.train.log_every == 0) {
      last_metrics = {{"step", step},
                      {"classification_loss", loss.classification_loss},
                      {"regression_loss", loss.regression_loss},
                      {"loss", loss.total},
                      {"learning_rate", trainer.learning_rate()}};
      log << last_metrics.dump() << "\n" << std::flush;
    }
    if (t.eval_every > 0 && step % t.eval_every == 0) {
      const mor::inference::Detector det(trainer.model(), cfg.infer, cfg.flow, device);
      const auto score = mor::training::score_samples(det, samples, cfg.eval.iou_threshold);
      json e = {{"step", step},
                {"train_map", score.report.map_value},
                {"max_false_positive_score", score.max_false_positive_score}};
      log << e.dump() << "\n" << std::flush;
      std::cout << "step " << step << " loss " << loss.total << " train_map " << score.report.map_value
                << " max_fp " << score.max_false_positive_score << std::endl;
      last_metrics.update(e);
      stopped = t.stop_map > 0.0 && score.report.map_value >= t.stop_map &&
                score.max_false_positive_score < t.stop_fp_score;
    }
    if (step % cfg.train.checkpoint_every == 0) {
      trainer.save_checkpoint(run / "checkpoints" / checkpoint_name(step), cfg_json, last_metrics);
    }
  }
  trainer.save_checkpoint(run / "final.pt", cfg_json, last_metrics);
  std::cout << "steps " << trainer.step() << (stopped ? " (target reached)" : "") << "\n";
  std::cout << "checkpoint " << (run / "final.pt").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- infer

/// Effective config for a checkpoint: its stored config overridden by the user's.
/// Explicit model settings that disagree with the checkpoint are an error.
mor::config::RunConfig config_for_checkpoint(const CommonFlags& f, const mor::detector::CheckpointMeta& meta) {
  auto cfg = resolve_config(f, meta.config.empty() ? std::nullopt : std::optional<json>(meta.config));
  if (meta.config.empty()) {
    cfg.flow.lags = meta.model.variant.lags;
    if (f.variant.empty() && f.lags.empty()) cfg.model.variant = meta.model.variant;
    if (f.input_size.empty()) cfg.model.input_size = meta.model.input_size;
    cfg.finalize();
  }
  if (cfg.model.variant.tag() != meta.model.variant.tag() || cfg.model.input_size != meta.model.input_size) {
    throw mor::ConfigError("checkpoint holds " + meta.model.variant.tag() + " at " +
                           std::to_string(meta.model.input_size.width) + "x" +
                           std::to_string(meta.model.input_size.height) + " but the config asks for " +
                           cfg.model.variant.tag() + " at " + std::to_string(cfg.model.input_size.width) + "x" +
                           std::to_string(cfg.model.input_size.height));
  }
  return cfg;
}

int cmd_infer(const CommonFlags& f, const std::string& checkpoint, const std::vector<std::string>& inputs,
              bool overlay, bool profile) {
  auto loaded = mor::detector::load_checkpoint(checkpoint);
  const auto cfg = config_for_checkpoint(f, loaded.meta);
  apply_determinism(cfg);
  const auto device = mor::detector::device_from_env();
  const auto videos = load_videos(inputs);
  const auto run = start_run(cfg, "infer");
  const mor::inference::Detector detector(loaded.model, cfg.infer, cfg.flow, device);

  fs::create_directories(run / "detections");
  json profiles = json::array();
  for (const auto& video : videos) {
    std::vector<mor::inference::Detection> all;
    std::int64_t first = -1, last = -1;
    const fs::path overlay_dir = run / "overlay" / video.name;
    if (overlay) fs::create_directories(overlay_dir);
    const auto timing = mor::inference::run_stream(
        detector, video, [&](const mor::FrameRecord& src, const std::vector<mor::inference::Detection>& dets) {
          if (first < 0) first = src.index;
          last = src.index;
          all.insert(all.end(), dets.begin(), dets.end());
          if (overlay) {
            const auto path = overlay_dir / (mor::frame_stem(src.index) + ".png");
            if (!cv::imwrite(path.string(), mor::inference::render_overlay(src.pixels, dets))) {
              throw mor::Error("cannot write " + path.string());
            }
          }
        });
    mor::inference::write_detections(run / "detections" / (video.name + ".txt"), all);
    write_json(run / "detections" / (video.name + ".json"),
               {{"video", video.name},
                {"frame_size", {video.frame_size.width, video.frame_size.height}},
                {"frames", video.length()},
                {"first_frame", first},
                {"last_frame", last},
                {"lags", cfg.flow.lags},
                {"variant", cfg.model.variant.tag()},
                {"checkpoint", fs::absolute(checkpoint).string()},
                {"detections", all.size()}});
    std::cout << video.name << ": " << timing.frames_processed << " frames, " << all.size() << " detections\n";
    if (profile) {
      const double inclusive = timing.wall_seconds > 0 ? timing.frames_processed / timing.wall_seconds : 0.0;
      const double exclusive = timing.model_seconds > 0 ? timing.frames_processed / timing.model_seconds : 0.0;
      profiles.push_back({{"video", video.name},
                          {"frames", timing.frames_processed},
                          {"wall_seconds", timing.wall_seconds},
                          {"flow_seconds", timing.flow_seconds},
                          {"model_seconds", timing.model_seconds},
                          {"fps_inclusive", inclusive},
                          {"fps_exclusive", exclusive}});
      std::printf("%s: %.2f FPS with flow, %.2f FPS model only\n", video.name.c_str(), inclusive, exclusive);
    }
  }
  if (profile) {
    const auto params = loaded.model->parameter_count();
    const auto bytes = static_cast<std::int64_t>(fs::file_size(checkpoint));
    write_json(run / "profile.json",
               {{"variant", cfg.model.variant.tag()},
                {"parameters", params},
                {"checkpoint_bytes", bytes},
                {"videos", profiles}});
    std::printf("parameters %lld, checkpoint %.1f MB\n", static_cast<long long>(params), bytes / 1e6);
  }
  return 0;
}

// ---------------------------------------------------------------- eval

struct ResultsFile {
  std::string video;
  fs::path detections;
  std::optional<json> meta;
};

std::vector<ResultsFile> find_results(const fs::path& path) {
  std::vector<ResultsFile> out;
  const auto add = [&](const fs::path& txt) {
    ResultsFile r{txt.stem().string(), txt, std::nullopt};
    auto meta_path = txt;
    meta_path.replace_extension(".json");
    if (fs::exists(meta_path)) {
      r.meta = read_json(meta_path);
      r.video = r.meta->at("video").get<std::string>();
    }
    out.push_back(std::move(r));
  };
  if (fs::is_regular_file(path)) {
    add(path);
  } else {
    const auto dir = fs::is_directory(path / "detections") ? path / "detections" : path;
    if (!fs::is_directory(dir)) throw mor::Error("no detections at " + path.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) add(p);
  }
  if (out.empty()) throw mor::Error("no detection files at " + path.string());
  return out;
}

int cmd_eval(const CommonFlags& f, const std::string& detections, const std::vector<std::string>& annotations,
             const std::string& thresholds) {
  auto cfg = resolve_config(f);
  if (!thresholds.empty()) cfg.eval.thresholds = parse_double_list(thresholds, "thresholds");
  cfg.finalize();
  const auto results = find_results(detections);
  const auto videos = load_videos(annotations);

  std::vector<mor::eval::VideoResults> inputs;
  for (const auto& r : results) {
    const auto it = std::find_if(videos.begin(), videos.end(), [&](const auto& v) { return v.name == r.video; });
    const mor::VideoSequence* video = nullptr;
    if (it != videos.end()) {
      video = &*it;
    } else if (results.size() == 1 && videos.size() == 1) {
      video = &videos.front();
    } else {
      throw mor::Error("no annotations for video '" + r.video + "'");
    }
    std::int64_t first = 0, last = static_cast<std::int64_t>(video->length()) - 1;
    if (r.meta) {
      first = r.meta->value("first_frame", first);
      last = r.meta->value("last_frame", last);
    }
    mor::eval::VideoResults v{video->name, video->frame_size, mor::inference::read_detections(r.detections), {}};
    for (const auto& g : video->annotations) {
      if (g.frame_index >= first && g.frame_index <= last) v.ground_truth.push_back(g);
    }
    inputs.push_back(std::move(v));
  }

  const auto run = start_run(cfg, "eval");
  std::vector<mor::eval::EvalReport> sweep;
  std::size_t discarded = 0;
  for (double thr : cfg.eval.thresholds) {
    sweep.push_back(mor::eval::evaluate_videos(inputs, thr, &discarded));
  }
  const auto main_report = mor::eval::evaluate_videos(inputs, cfg.eval.iou_threshold, &discarded);

  write_text(run / "report.tsv", mor::eval::format_report_table(sweep));
  write_text(run / "sweep.tsv", mor::eval::format_sweep_series(sweep));
  json j = {{"main", mor::eval::report_to_json(main_report)},
            {"discarded_outside_frame", discarded},
            {"sweep", json::array()}};
  for (const auto& r : sweep) j["sweep"].push_back(mor::eval::report_to_json(r));
  write_json(run / "report.json", j);
  std::cout << mor::eval::format_report_table({main_report});
  std::cout << mor::eval::format_sweep_series(sweep);
  return 0;
}

// ---------------------------------------------------------------- visualize

int cmd_visualize(const CommonFlags& f, const std::string& checkpoint, const std::string& input,
                  std::vector<std::int64_t> frames) {
  auto loaded = mor::detector::load_checkpoint(checkpoint);
  const auto cfg = config_for_checkpoint(f, loaded.meta);
  apply_determinism(cfg);
  const auto device = mor::detector::device_from_env();
  const auto videos = load_videos({input});
  const auto& video = videos.front();
  const mor::inference::Detector detector(loaded.model, cfg.infer, cfg.flow, device);
  if (frames.empty()) frames.push_back(detector.max_lag());
  std::sort(frames.begin(), frames.end());
  for (auto t : frames) {
    if (t < 0 || t >= static_cast<std::int64_t>(video.length())) {
      throw mor::Error("frame " + std::to_string(t) + " is outside the video");
    }
  }
  const auto run = start_run(cfg, "visualize");
  mor::flow::FrameRingBuffer buffer(static_cast<std::size_t>(detector.max_lag()) + 1);
  std::size_t next = 0;
  for (std::int64_t i = 0; i <= frames.back(); ++i) {
    auto frame = video.frame(static_cast<std::size_t>(i));
    cv::resize(frame.pixels, frame.pixels, detector.input_size(), 0, 0, cv::INTER_LINEAR);
    buffer.push(std::move(frame));
    while (next < frames.size() && frames[next] == i) {
      const auto stack = detector.prepare(buffer, i);
      for (const auto& h : mor::inference::visualize_features(loaded.model, stack, device)) {
        const auto path = run / (mor::frame_stem(i) + "_" + h.name + ".png");
        if (!cv::imwrite(path.string(), h.image)) throw mor::Error("cannot write " + path.string());
      }
      std::cout << "frame " << i << ": 3 heatmaps\n";
      ++next;
    }
  }
  return 0;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-object recognition: training, online inference and evaluation"};
  app.require_subcommand(1);

  CommonFlags common;

  auto* synth = app.add_subcommand("synth", "Render synthetic suites with exact ground truth");
  std::vector<std::string> suites;
  int synth_frames = 25;
  std::string canvas;
  add_common(synth, common);
  synth->add_option("--suite", suites, "Suite names (s1..s5) or 'all'")->delimiter(',');
  synth->add_option("--frames", synth_frames, "Frames per video")->check(CLI::PositiveNumber);
  synth->add_option("--canvas", canvas, "Canvas size: N or WxH");

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  std::vector<std::string> stat_sets;
  int normalized = 608;
  add_common(stats, common);
  stats->add_option("--dataset", stat_sets, "Dataset root or video directory")->required()->delimiter(',');
  stats->add_option("--normalized-size", normalized, "Measure boxes after resizing to NxN (0: native)");

  auto* train = app.add_subcommand("train", "Train a detector");
  TrainFlags tf;
  add_common(train, common);
  train->add_option("--dataset", tf.datasets, "Dataset roots or video directories")->required()->delimiter(',');
  train->add_option("--lr", tf.lr, "Learning rate");
  train->add_option("--steps", tf.steps, "Training iterations");
  train->add_option("--checkpoint-every", tf.checkpoint_every, "Checkpoint interval");
  train->add_option("--log-every", tf.log_every, "Metrics log interval");
  train->add_option("--resume", tf.resume, "Resume from a checkpoint");
  train->add_option("--eval-every", tf.eval_every, "Score the training frames every N steps");
  train->add_option("--stop-map", tf.stop_map, "Stop once training-frame mAP reaches this value");
  train->add_option("--stop-fp-score", tf.stop_fp_score,
                    "With --stop-map, also require every false positive to score below this");
  train->add_flag("--hflip", tf.hflip, "Random horizontal flips");

  auto* infer = app.add_subcommand("infer", "Online inference over videos");
  std::string infer_ckpt;
  std::vector<std::string> infer_inputs;
  bool overlay = false, profile = false;
  add_common(infer, common);
  infer->add_option("--checkpoint", infer_ckpt, "Checkpoint file")->required();
  infer->add_option("--video", infer_inputs, "Video directory or dataset root")->required()->delimiter(',');
  infer->add_flag("--overlay", overlay, "Write annotated frames");
  infer->add_flag("--profile", profile, "Report throughput, parameters and model size");

  auto* evaluate = app.add_subcommand("eval", "Score detections against annotations");
  std::string eval_dets, thresholds;
  std::vector<std::string> eval_annos;
  add_common(evaluate, common);
  evaluate->add_option("--detections", eval_dets, "Detections file, directory or infer run")->required();
  evaluate->add_option("--annotations", eval_annos, "Dataset root or video directory")->required()->delimiter(',');
  evaluate->add_option("--thresholds", thresholds, "Comma-separated IoU thresholds for the sweep");

  auto* vis = app.add_subcommand("visualize", "Dump stem, P3 and P4 activation heatmaps");
  std::string vis_ckpt, vis_input;
  std::vector<std::int64_t> vis_frames;
  add_common(vis, common);
  vis->add_option("--checkpoint", vis_ckpt, "Checkpoint file")->required();
  vis->add_option("--video", vis_input, "Video directory")->required();
  vis->add_option("--frame", vis_frames, "Frame indices")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (*synth) return cmd_synth(common, suites, synth_frames, canvas);
    if (*stats) return cmd_stats(common, stat_sets, normalized);
    if (*train) return cmd_train(common, tf);
    if (*infer) return cmd_infer(common, infer_ckpt, infer_inputs, overlay, profile);
    if (*evaluate) return cmd_eval(common, eval_dets, eval_annos, thresholds);
    if (*vis) return cmd_visualize(common, vis_ckpt, vis_input, vis_frames);
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}
