#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "mor/config/run_config.hpp"
#include "mor/error.hpp"

using namespace mor;
using namespace mor::config;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("mor_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("defaults finalize cleanly") {
  RunConfig c;
  CHECK_NOTHROW(c.finalize());
  CHECK(c.model.variant.lags == c.flow.lags);
  CHECK(c.model.input_size == cv::Size(608, 608));
  CHECK(c.eval.thresholds.size() == 7);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS((void)from_json(json{{"flw", json::object()}}), ConfigError);
  CHECK_THROWS_AS((void)from_json(json{{"flow", {{"lag", {1}}}}}), ConfigError);
}

TEST_CASE("json values override the base and absent keys keep it") {
  RunConfig base;
  base.train.learning_rate = 3e-4;
  base.flow.max_displacement = 16.0;
  const auto c = from_json(json{{"flow", {{"lags", {1, 3, 5}}}}}, base);
  CHECK(c.flow.lags == std::vector<int>{1, 3, 5});
  CHECK(c.train.learning_rate == 3e-4);
  CHECK(c.flow.max_displacement == 16.0);
}

TEST_CASE("serialization round-trips and the hash is stable") {
  RunConfig c;
  c.flow.lags = {1, 3, 5};
  c.finalize();
  const auto back = from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 10);
  RunConfig d = c;
  d.train.seed += 1;
  CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config files accept comments and report parse errors") {
  const auto dir = scratch_dir("config");
  {
    std::ofstream(dir / "ok.json") << "{ // lags\n \"flow\": {\"lags\": [1]} }";
    std::ofstream(dir / "bad.json") << "{ \"flow\": ";
  }
  CHECK(load_config_file(dir / "ok.json").flow.lags == std::vector<int>{1});
  CHECK_THROWS_AS((void)load_config_file(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS((void)load_config_file(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unsupported lags need the explicit opt-in") {
  RunConfig c;
  c.flow.lags = {2, 4};
  CHECK_THROWS_AS(c.finalize(), ConfigError);
  c.allow_any_lags = true;
  CHECK_NOTHROW(c.finalize());
  CHECK(c.model.variant.lags == std::vector<int>{2, 4});
}

TEST_CASE("run directories are never reused") {
  RunConfig c;
  c.runs_dir = scratch_dir("runs");
  std::set<std::filesystem::path> seen;
  for (int i = 0; i < 5; ++i) {
    const auto p = create_run_dir(c, "train");
    CHECK(std::filesystem::is_directory(p));
    CHECK(seen.insert(p).second);
  }
  std::filesystem::remove_all(c.runs_dir);
}
