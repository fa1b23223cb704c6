// Copyright 2026 The qdaif Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/report.hpp"
#include "qdaif/serialize.hpp"
#include "qdaif/stats.hpp"
#include "qdaif/toml.hpp"

using namespace qdaif;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = fs::path(QDAIF_SOURCE_DIR) / "presets";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qdaif-io-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(QDAIF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error_path(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("TOML subset parse") {
  const auto doc = toml::parse(R"(# comment
title = "x"
n = 3
f = 0.25
neg = -inf
ok = true
list = [1, 2, [3]]
"quoted key" = 'lit\eral'

[a.b]
c = """
two
lines"""
inline = { k = 1, s = "v" }

[[arr]]
x = 1
[[arr]]
x = 2
)");
  CHECK(doc["title"] == "x");
  CHECK(doc["n"] == 3);
  CHECK(doc["f"] == 0.25);
  CHECK(doc["neg"].get<double>() == -std::numeric_limits<double>::infinity());
  CHECK(doc["ok"] == true);
  CHECK(doc["list"][2][0] == 3);
  CHECK(doc["quoted key"] == "lit\\eral");
  CHECK(doc["a"]["b"]["c"] == "two\nlines");
  CHECK(doc["a"]["b"]["inline"]["s"] == "v");
  CHECK(doc["arr"].size() == 2);
  CHECK(doc["arr"][1]["x"] == 2);
  CHECK(toml::parse(toml::write(doc)) == doc);
}

TEST_CASE("TOML errors carry line numbers") {
  CHECK(config_error_path([] { toml::parse("a = 1\nb = \n"); }) == "line 2");
  CHECK(config_error_path([] { toml::parse("a = 1\na = 2\n"); }) == "line 2");
  CHECK(config_error_path([] { toml::parse("d = 1979-05-27\n"); }) == "line 1");
  CHECK(config_error_path([] { toml::parse("s = \"open\n"); }) == "line 1");
  CHECK(toml::parse_value("[1, \"a\"]") == Json::array({1, "a"}));
}

TEST_CASE("every preset loads and round-trips through the document form") {
  for (const auto& entry : fs::directory_iterator(kPresets)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path());
    const Json doc = config_to_json(c);
    const auto again = config_from_json(toml::parse(toml::write(doc)));
    CHECK(config_to_json(again) == doc);
  }
}

TEST_CASE("config errors name the field") {
  const auto synth = kPresets / "synthetic.toml";
  CHECK(config_error_path([&] {
          load_config(synth, {{"archive.axes.0.eval_instruction=\"\""}, {}, {}});
        }) == "archive.axes[0].eval_instruction");
  CHECK(config_error_path([&] { load_config(synth, {{"run.method=map-elites"}, {}, {}}); }) ==
        "run.method");
  CHECK(config_error_path([&] { load_config(synth, {{"run.iterations=-3"}, {}, {}}); }) ==
        "run.iterations");
  CHECK(config_error_path([&] { load_config(synth, {{"archive.axes.9.name=x"}, {}, {}}); }) ==
        "archive.axes.9.name");
  CHECK(config_error_path([&] { load_config(synth, {{"novalue"}, {}, {}}); }) == "novalue");
  CHECK(config_error_path([&] { load_config(synth, {{"backend.kind=telepathy"}, {}, {}}); }) ==
        "backend.kind");

  auto http = load_config(kPresets / "poetry.toml");
  CHECK_NOTHROW(check_capabilities(http));
  auto opinions = load_config(kPresets / "opinions.toml",
                              {{"backend.supports_logprobs=false"}, {}, {}});
  CHECK(config_error_path([&] { check_capabilities(opinions); }) ==
        "backend.supports_logprobs");
}

TEST_CASE("overrides and load options") {
  const auto c = load_config(kPresets / "synthetic.toml",
                             {{"archive.depth_limit=5", "archive.axes.0.name=digits",
                               "sampling.temperature=0.5"},
                              42,
                              std::string("oracle")});
  CHECK(c.archive.depth_limit == 5);
  CHECK(c.archive.axes[0].name() == "digits");
  CHECK(c.sampling.temperature == 0.5);
  CHECK(c.seed == 42);
}

TEST_CASE("serialization round trips") {
  Archive a(fx::config_poetry());
  Rng rng(1);
  a.insert(fx::individual(1, 7.0, {Categorical{1}, Categorical{2}}, "a poem"), rng);
  a.insert(fx::individual(2, 7.0, {Categorical{1}, Categorical{2}}), rng);
  a.insert(fx::individual(3, 9.5, {Categorical{4}, Categorical{0}}), rng);
  const Json j = archive_to_json(a);
  CHECK(j["schema_version"] == kSchemaVersion);
  const Archive b = archive_from_json(j);
  CHECK(archive_to_json(b) == j);
  CHECK(b.qd_score() == a.qd_score());

  DiversityDescriptor d{{Continuous{0.125}, Categorical{3}}};
  CHECK(descriptor_from_json(descriptor_to_json(d)) == d);
  FeedbackRecord f{"quality", "p", "r", {{"yes", -0.1}}, 4};
  CHECK(feedback_record_from_json(feedback_record_to_json(f)) == f);

  for (const auto& axis : fx::config_2d().axes) {
    CHECK(axis_to_json(axis_from_json(axis_to_json(axis), "a")) == axis_to_json(axis));
  }
}

TEST_CASE("run log round trip") {
  RunConfig c = load_config(kPresets / "synthetic-expand.toml");
  c.iterations = 80;
  c.schedule[0].iteration = 60;
  auto backend = make_run_backend(c);
  const auto log = run(c, *backend);
  std::stringstream ss;
  write_runlog(ss, log);
  const auto back = read_runlog(ss);
  CHECK(back.complete);
  REQUIRE(back.records.size() == log.records.size());
  REQUIRE(back.remaps.size() == 1);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    REQUIRE(record_to_json(back.records[i]) == record_to_json(log.records[i]));
  }
  CHECK(archive_to_json(replay(back)) == archive_to_json(*log.archive));

  std::stringstream bad("{\"type\": \"iteration\"}\n");
  try {
    read_runlog(bad);
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.line() == 1);
  }
  std::stringstream broken;
  write_runlog(broken, log);
  std::string text = broken.str();
  text.insert(text.find('\n') + 1, "garbage\n");
  std::stringstream garbled(text);
  try {
    read_runlog(garbled);
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("heatmap rendering") {
  Archive one(fx::config_1d());
  Rng rng(2);
  one.insert(fx::at(1, 0.5, 0.5), rng);
  const auto svg = render_heatmap_svg(one);
  CHECK(svg.starts_with("<svg"));
  CHECK(count(svg, "<rect class=\"bin") == 20);
  CHECK(count(svg, "<rect class=\"bin empty\"") == 19);
  CHECK(render_heatmap_svg(one) == svg);

  Archive poetry(fx::config_poetry());
  CHECK(count(render_heatmap_svg(poetry), "<rect class=\"bin empty\"") == 25);
  const auto labelled = render_heatmap_svg(poetry);
  for (const auto& g : fx::kGenres) CHECK(labelled.find(">" + g + "<") != std::string::npos);

  ArchiveConfig three = fx::config_2d();
  three.axes.push_back(fx::continuous("third"));
  CHECK_THROWS_AS(render_heatmap_svg(Archive(three)), StructuralError);
}

TEST_CASE("run directories, summaries and reports") {
  const auto dir = scratch("report");
  RunConfig c = load_config(kPresets / "synthetic.toml");
  c.iterations = 60;
  run_to_directory(c, dir / "a", 10);
  c.seed = 2;
  run_to_directory(c, dir / "b", 10);
  for (const char* f : {kRunLogFile, kArchiveFile, kMetricsFile, kResolvedConfigFile}) {
    CHECK(fs::exists(dir / "a" / f));
  }
  const auto metrics = slurp(dir / "a" / kMetricsFile);
  CHECK(count(metrics, "\n") == 7);

  const auto sa = summarize_run(dir / "a");
  CHECK(sa.complete);
  CHECK(sa.method == "qdaif-lmx-near");
  const auto sb = summarize_run(dir / "b");
  const auto md = render_report({sa, sb}, 1000, 0);
  CHECK(md.find("# QD search report") != std::string::npos);
  CHECK(md.find("Mann-Whitney") == std::string::npos);
  CHECK(render_report({sa, sb}, 1000, 0) == md);

  c.seed = 3;
  c.method = Method::kRandomSearch;
  run_to_directory(c, dir / "c", 10);
  const auto with_baseline = render_report({sa, sb, summarize_run(dir / "c")}, 1000, 0);
  CHECK(with_baseline.find("Mann-Whitney") != std::string::npos);

  c.archive.depth_limit = 7;
  run_to_directory(c, dir / "d", 10);
  CHECK_THROWS_AS(render_report({sa, summarize_run(dir / "d")}, 1000, 0), StructuralError);

  const auto m = summarize_methods({sa, sb}, 1000, 0);
  REQUIRE(m.size() == 1);
  CHECK(m[0].runs == 2);
  CHECK(m[0].qd->low <= m[0].qd->high);
  fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  const std::string synth = (kPresets / "synthetic.toml").string();
  const std::string d = dir.string();

  CHECK(cli("run -c " + synth + " --set run.iterations=30 --set run.init_iterations=10 -o " + d + "/run") == 0);
  for (const char* f : {kRunLogFile, kArchiveFile, kMetricsFile, kResolvedConfigFile}) {
    CHECK(fs::exists(dir / "run" / f));
  }
  // The resolved config reproduces the run.
  CHECK(cli("run -c " + d + "/run/" + kResolvedConfigFile + " -o " + d + "/rerun") == 0);
  CHECK(slurp(dir / "run" / kArchiveFile) == slurp(dir / "rerun" / kArchiveFile));

  CHECK(cli("run -c " + synth + " --set 'archive.axes.0.eval_instruction=\"\"' -o " + d +
            "/bad") == 1);
  CHECK_FALSE(fs::exists(dir / "bad" / kRunLogFile));
  CHECK(cli("validate -c " + synth) == 0);
  CHECK(cli("validate --schema") == 0);
  CHECK(cli("validate -c " + d + "/missing.toml") == 1);

  CHECK(cli("sweep -c " + synth + " --set run.iterations=20 --set run.init_iterations=10 --seeds 1,2 -j 2 --resamples 500 -o " +
            d + "/sweep") == 0);
  CHECK(fs::exists(dir / "sweep" / "seed-1" / kArchiveFile));
  CHECK(fs::exists(dir / "sweep" / "seed-2" / kArchiveFile));
  const auto summary = slurp(dir / "sweep" / "summary.csv");
  CHECK(summary.starts_with("method,runs,complete_runs,"));
  CHECK(summary.find("qdaif-lmx-near,2,2,") != std::string::npos);
  CHECK(count(slurp(dir / "sweep" / "seeds.csv"), "\n") == 3);

  CHECK(cli("report " + d + "/sweep/seed-1 " + d + "/sweep/seed-2 --resamples 500 -o " + d +
            "/report.md") == 0);
  CHECK(fs::exists(dir / "report.md"));
  CHECK(cli("run -c " + synth + " --set run.iterations=20 --set run.init_iterations=10 --set archive.depth_limit=3 -o " + d +
            "/shallow") == 0);
  CHECK(cli("report " + d + "/run " + d + "/shallow") == 1);
  CHECK(cli("heatmap " + d + "/run/archive.json " + d + "/map.svg") == 0);
  CHECK(count(slurp(dir / "map.svg"), "<rect class=\"bin") == 20);

  // An exhausted mock script ends the run incomplete.
  {
    std::ofstream script(dir / "script.jsonl");
    script << "{\"complete\": \"0123\"}\n";
  }
  CHECK(cli("run -c " + synth + " --backend mock --set backend.script=" + d +
            "/script.jsonl -o " + d + "/mock") == 2);
  CHECK(fs::exists(dir / "mock" / kRunLogFile));
  fs::remove_all(dir);
}
