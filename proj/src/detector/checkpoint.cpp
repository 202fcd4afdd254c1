#include "mor/detector/checkpoint.hpp"

#include "mor/detector/options_json.hpp"
#include "mor/error.hpp"

namespace mor::detector {
namespace {

nlohmann::json meta_to_json(const CheckpointMeta& m) {
  return {{"format_version", m.format_version},
          {"model",
           {{"variant", m.model.variant},
            {"anchors", m.model.anchors},
            {"head", m.model.head},
            {"input_size", {m.model.input_size.width, m.model.input_size.height}}}},
          {"step", m.step},
          {"config", m.config},
          {"metrics", m.metrics}};
}

CheckpointMeta meta_from_json(const nlohmann::json& j) {
  CheckpointMeta m;
  m.format_version = j.at("format_version").get<int>();
  if (m.format_version != kCheckpointFormatVersion) {
    throw Error("unsupported checkpoint format version " + std::to_string(m.format_version));
  }
  const auto& model = j.at("model");
  m.model.variant = model.at("variant").get<ModelVariant>();
  m.model.anchors = model.at("anchors").get<AnchorConfig>();
  m.model.head = model.at("head").get<HeadConfig>();
  const auto size = model.at("input_size").get<std::vector<int>>();
  m.model.input_size = {size.at(0), size.at(1)};
  m.step = j.at("step").get<std::int64_t>();
  m.config = j.value("config", nlohmann::json::object());
  m.metrics = j.value("metrics", nlohmann::json::object());
  return m;
}

torch::serialize::InputArchive open_archive(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("checkpoint not found: " + path.string());
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
  } catch (const c10::Error& e) {
    throw Error("cannot read checkpoint " + path.string() + ": " + e.what_without_backtrace());
  }
  return archive;
}

CheckpointMeta read_meta(torch::serialize::InputArchive& archive) {
  c10::IValue value;
  if (!archive.try_read("meta", value) || !value.isString()) {
    throw Error("checkpoint has no metadata record");
  }
  return meta_from_json(nlohmann::json::parse(value.toStringRef()));
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, MorNetImpl& model, const CheckpointMeta& meta,
                     torch::optim::Optimizer* optimizer) {
  torch::serialize::OutputArchive archive;
  archive.write("meta", c10::IValue(meta_to_json(meta).dump()));
  torch::serialize::OutputArchive weights;
  model.save(weights);
  archive.write("model", weights);
  if (optimizer) {
    torch::serialize::OutputArchive opt;
    optimizer->save(opt);
    archive.write("optimizer", opt);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Write then rename so an interrupted save never leaves a truncated checkpoint.
  const auto tmp = path.string() + ".tmp";
  archive.save_to(tmp);
  std::filesystem::rename(tmp, path);
}

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path) {
  auto archive = open_archive(path);
  return read_meta(archive);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  auto archive = open_archive(path);
  LoadedCheckpoint out;
  out.meta = read_meta(archive);
  auto options = out.meta.model;
  options.variant.backbone.pretrained = false;
  out.model = MorNet(options);
  torch::serialize::InputArchive weights;
  if (!archive.try_read("model", weights)) throw Error("checkpoint has no model weights");
  try {
    out.model->load(weights);
  } catch (const c10::Error& e) {
    throw Error("checkpoint weights do not match the recorded architecture: " +
                std::string(e.what_without_backtrace()));
  }
  return out;
}

bool load_optimizer_state(const std::filesystem::path& path, torch::optim::Optimizer& optimizer) {
  auto archive = open_archive(path);
  torch::serialize::InputArchive opt;
  if (!archive.try_read("optimizer", opt)) return false;
  optimizer.load(opt);
  return true;
}

}  // namespace mor::detector
