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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/report.hpp"
#include "qdaif/serialize.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kIncomplete = 2;

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::string> backend;
  std::size_t sample_every = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "TOML config file")->required();
  cmd->add_option("--set", c.overrides, "dotted.key=value override (repeatable)")
      ->allow_extra_args(false);
  cmd->add_option("--backend", c.backend, "override backend.kind (oracle, mock, http)");
  cmd->add_option("--sample-every", c.sample_every, "metrics cadence in iterations")
      ->check(CLI::PositiveNumber);
}

qdaif::LoadOptions options_of(const Common& c, std::optional<std::uint64_t> seed) {
  qdaif::LoadOptions o;
  o.overrides = c.overrides;
  o.seed = seed;
  o.backend_kind = c.backend;
  return o;
}

void write_text(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qdaif::ArgumentError("cannot write " + path.string());
  out << body;
}

void report_config_error(const qdaif::ConfigError& e) {
  std::cerr << "config error: " << e.what() << '\n';
}

int cmd_run(const Common& c, std::optional<std::uint64_t> seed, const std::string& out) {
  qdaif::RunConfig config;
  try {
    config = qdaif::load_config(c.config, options_of(c, seed));
    qdaif::check_capabilities(config);
  } catch (const qdaif::ConfigError& e) {
    report_config_error(e);
    return kConfigFailure;
  }
  const auto log = qdaif::run_to_directory(config, out, c.sample_every);
  if (!log.complete) {
    std::cerr << "run aborted: " << log.abort_reason << '\n';
    return kIncomplete;
  }
  std::printf("%s: %zu iterations, qd_score %.6f, coverage %.6f\n", out.c_str(),
              log.records.size(), log.archive->qd_score(), log.archive->coverage());
  return kOk;
}

int cmd_sweep(const Common& c, const std::vector<std::uint64_t>& seeds,
              const std::string& out, unsigned jobs, std::size_t resamples) {
  std::vector<qdaif::RunConfig> configs;
  try {
    for (auto s : seeds) {
      configs.push_back(qdaif::load_config(c.config, options_of(c, s)));
      qdaif::check_capabilities(configs.back());
    }
  } catch (const qdaif::ConfigError& e) {
    report_config_error(e);
    return kConfigFailure;
  }

  auto dir_of = [&](std::uint64_t s) { return fs::path(out) / ("seed-" + std::to_string(s)); };
  auto one = [&](std::size_t i) -> bool {
    try {
      const auto log = qdaif::run_to_directory(configs[i], dir_of(seeds[i]), c.sample_every);
      if (!log.complete) {
        std::cerr << "seed " << seeds[i] << " aborted: " << log.abort_reason << '\n';
      }
      return log.complete;
    } catch (const qdaif::Error& e) {
      std::cerr << "seed " << seeds[i] << " failed: " << e.what() << '\n';
      return false;
    }
  };

  std::vector<bool> ok(seeds.size(), false);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) ok[i] = one(i);
  } else {
    for (std::size_t start = 0; start < seeds.size(); start += jobs) {
      std::vector<std::future<bool>> batch;
      for (std::size_t i = start; i < std::min(seeds.size(), start + jobs); ++i) {
        batch.push_back(std::async(std::launch::async, one, i));
      }
      for (std::size_t k = 0; k < batch.size(); ++k) ok[start + k] = batch[k].get();
    }
  }

  std::vector<qdaif::RunSummary> runs;
  bool all_complete = true;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    all_complete = all_complete && ok[i];
    if (!fs::exists(dir_of(seeds[i]) / qdaif::kArchiveFile)) {
      qdaif::RunSummary missing;
      missing.dir = dir_of(seeds[i]);
      missing.method = std::string(qdaif::to_string(configs[i].method));
      missing.seed = seeds[i];
      missing.archive = configs[i].archive;
      runs.push_back(std::move(missing));
      continue;
    }
    runs.push_back(qdaif::summarize_run(dir_of(seeds[i])));
  }
  std::ostringstream seeds_csv;
  qdaif::write_seeds_csv(seeds_csv, runs);
  write_text(fs::path(out) / "seeds.csv", seeds_csv.str());
  std::ostringstream summary_csv;
  qdaif::write_summary_csv(summary_csv, qdaif::summarize_methods(runs, resamples, 0));
  write_text(fs::path(out) / "summary.csv", summary_csv.str());
  std::cout << summary_csv.str();
  return all_complete ? kOk : kIncomplete;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out,
               std::size_t resamples, std::uint64_t seed) {
  std::vector<qdaif::RunSummary> runs;
  for (const auto& d : dirs) runs.push_back(qdaif::summarize_run(d));
  const std::string md = qdaif::render_report(runs, resamples, seed);
  if (out.empty()) {
    std::cout << md;
  } else {
    write_text(out, md);
  }
  return kOk;
}

int cmd_heatmap(const std::string& archive_path, const std::string& out) {
  const auto archive = qdaif::read_archive(archive_path);
  const std::string svg = qdaif::render_heatmap_svg(archive);
  if (out.empty()) {
    std::cout << svg;
  } else {
    write_text(out, svg);
  }
  return kOk;
}

int cmd_validate(const Common& c, bool schema) {
  if (schema) {
    std::cout << qdaif::config_schema().dump(2) << '\n';
    return kOk;
  }
  if (c.config.empty()) {
    std::cerr << "validate needs --config or --schema\n";
    return kConfigFailure;
  }
  try {
    const auto config = qdaif::load_config(c.config, options_of(c, std::nullopt));
    qdaif::check_capabilities(config);
    std::cout << "ok: " << qdaif::to_string(config.method) << ", "
              << config.archive.total_bins() << " bins, " << config.iterations
              << " iterations\n";
  } catch (const qdaif::ConfigError& e) {
    report_config_error(e);
    return kConfigFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-diversity search over generated text with model feedback"};
  app.require_subcommand(1);

  Common run_opts;
  std::optional<std::uint64_t> run_seed;
  std::string run_out = "runs/run";
  auto* run = app.add_subcommand("run", "execute one search run");
  add_common(run, run_opts);
  run->add_option("--seed", run_seed, "override run.seed");
  run->add_option("-o,--out", run_out, "output directory");

  Common sweep_opts;
  std::vector<std::uint64_t> sweep_seeds;
  std::string sweep_out = "runs/sweep";
  unsigned jobs = 1;
  std::size_t sweep_resamples = 100000;
  auto* sweep = app.add_subcommand("sweep", "run several seeds and summarize");
  add_common(sweep, sweep_opts);
  sweep->add_option("--seeds", sweep_seeds, "seeds (comma separated or repeated)")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--out", sweep_out, "output directory");
  sweep->add_option("-j,--jobs", jobs, "seeds run concurrently");
  sweep->add_option("--resamples", sweep_resamples, "bootstrap resamples")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> report_dirs;
  std::string report_out;
  std::size_t report_resamples = 100000;
  std::uint64_t report_seed = 0;
  auto* report = app.add_subcommand("report", "markdown comparison of run directories");
  report->add_option("dirs", report_dirs, "run directories")->required()->check(CLI::ExistingDirectory);
  report->add_option("-o,--out", report_out, "output file (default stdout)");
  report->add_option("--resamples", report_resamples, "bootstrap resamples")
      ->check(CLI::PositiveNumber);
  report->add_option("--seed", report_seed, "bootstrap seed");

  std::string heat_in;
  std::string heat_out;
  auto* heatmap = app.add_subcommand("heatmap", "SVG grid of an archive snapshot");
  heatmap->add_option("archive", heat_in, "archive.json")->required()->check(CLI::ExistingFile);
  heatmap->add_option("out", heat_out, "output SVG (default stdout)");

  Common validate_opts;
  bool want_schema = false;
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("-c,--config", validate_opts.config, "TOML config file");
  validate->add_option("--set", validate_opts.overrides, "dotted.key=value override");
  validate->add_option("--backend", validate_opts.backend, "override backend.kind");
  validate->add_flag("--schema", want_schema, "print the config JSON Schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, run_seed, run_out);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_seeds, sweep_out, jobs, sweep_resamples);
    if (*report) return cmd_report(report_dirs, report_out, report_resamples, report_seed);
    if (*heatmap) return cmd_heatmap(heat_in, heat_out);
    if (*validate) return cmd_validate(validate_opts, want_schema);
  } catch (const qdaif::ConfigError& e) {
    report_config_error(e);
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigFailure;
  }
  return kConfigFailure;
}
