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

#include "qdaif/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/serialize.hpp"
#include "qdaif/toml.hpp"

namespace qdaif {
namespace {

std::string fmt(double v, const char* spec = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt_g(double v) { return fmt(v, "%.17g"); }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Piecewise-linear colour ramp from dark blue through teal to yellow.
std::string ramp(double t) {
  static constexpr double kStops[][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const auto i = std::min(static_cast<std::size_t>(t), std::size_t{3});
  const double f = t - static_cast<double>(i);
  char buf[16];
  int rgb[3];
  for (int k = 0; k < 3; ++k) {
    rgb[k] = static_cast<int>(
        std::lround(kStops[i][k] + (kStops[i + 1][k] - kStops[i][k]) * f));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::vector<std::string> axis_tick_labels(const AxisSpec& axis) {
  std::vector<std::string> out;
  if (axis.is_continuous()) {
    for (double t : axis.continuous().grid.ticks()) out.push_back(fmt(t, "%g"));
  } else {
    out = axis.categorical().labels;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << body;
}

std::string ci_cells(const std::optional<ConfidenceInterval>& ci) {
  if (!ci) return " n/a | n/a | n/a |";
  return " " + fmt(ci->mean) + " | " + fmt(ci->low) + " | " + fmt(ci->high) + " |";
}

std::string csv_ci(const std::optional<ConfidenceInterval>& ci) {
  if (!ci) return ",,";
  return fmt_g(ci->mean) + "," + fmt_g(ci->low) + "," + fmt_g(ci->high);
}

}  // namespace

RunLog run_to_directory(const RunConfig& config,
                        const std::filesystem::path& out_dir,
                        std::size_t sample_every) {
  check_capabilities(config);
  auto backend = make_run_backend(config);
  return run_to_directory(config, *backend, out_dir, sample_every);
}

RunLog run_to_directory(const RunConfig& config, Backend& backend,
                        const std::filesystem::path& out_dir,
                        std::size_t sample_every) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / kResolvedConfigFile, toml::write(config_to_json(config)));

  std::ofstream log_out(out_dir / kRunLogFile, std::ios::binary);
  if (!log_out) throw ArgumentError("cannot write run log in " + out_dir.string());
  log_out << runlog_header(config).dump() << '\n' << std::flush;
  RunObserver observer;
  observer.on_record = [&](const IterationRecord& r) {
    log_out << record_to_json(r).dump() << '\n' << std::flush;
  };
  observer.on_remap = [&](const RemapEvent& ev) {
    log_out << remap_to_json(ev).dump() << '\n' << std::flush;
  };
  RunLog log = run(config, backend, observer);
  log_out << runlog_footer(log).dump() << '\n';
  log_out.close();

  write_file(out_dir / kArchiveFile, archive_to_json(*log.archive).dump(1) + "\n");
  std::ostringstream metrics;
  write_metrics_csv(metrics, timeline(log, sample_every));
  write_file(out_dir / kMetricsFile, metrics.str());
  return log;
}

RunSummary summarize_run(const std::filesystem::path& dir) {
  RunSummary s;
  s.dir = dir;
  const RunLog log = read_runlog(dir / kRunLogFile);
  s.method = std::string(to_string(log.config.method));
  s.seed = log.config.seed;
  s.complete = log.complete;
  const Archive archive = read_archive(dir / kArchiveFile);
  s.qd_score = archive.qd_score();
  s.coverage = archive.coverage();
  s.best_quality = archive.best_quality();
  s.archive = archive.config();
  return s;
}

std::vector<MethodSummary> summarize_methods(const std::vector<RunSummary>& runs,
                                             std::size_t resamples,
                                             std::uint64_t seed) {
  std::vector<MethodSummary> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : runs) {
    auto [it, fresh] = index.emplace(r.method, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().method = r.method;
    }
    auto& m = out[it->second];
    ++m.runs;
    if (!r.complete) continue;
    ++m.complete_runs;
    m.qd_scores.push_back(r.qd_score);
    m.coverages.push_back(r.coverage);
    if (r.best_quality) m.best_qualities.push_back(*r.best_quality);
  }
  for (auto& m : out) {
    const std::uint64_t s = derive_seed(seed, m.method);
    if (!m.qd_scores.empty()) {
      m.qd = bootstrap_ci(m.qd_scores, resamples, 0.95, s);
      m.coverage = bootstrap_ci(m.coverages, resamples, 0.95, s);
    }
    if (!m.best_qualities.empty()) {
      m.best = bootstrap_ci(m.best_qualities, resamples, 0.95, s);
    }
  }
  return out;
}

void write_seeds_csv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << "method,seed,complete,qd_score,coverage,best_quality,dir\n";
  for (const auto& r : runs) {
    out << r.method << ',' << r.seed << ',' << (r.complete ? "true" : "false")
        << ',' << fmt_g(r.qd_score) << ',' << fmt_g(r.coverage) << ','
        << (r.best_quality ? fmt_g(*r.best_quality) : "") << ','
        << r.dir.filename().string() << '\n';
  }
}

void write_summary_csv(std::ostream& out,
                       const std::vector<MethodSummary>& methods) {
  out << "method,runs,complete_runs,qd_mean,qd_ci_low,qd_ci_high,"
         "coverage_mean,coverage_ci_low,coverage_ci_high,"
         "best_mean,best_ci_low,best_ci_high\n";
  for (const auto& m : methods) {
    out << m.method << ',' << m.runs << ',' << m.complete_runs << ','
        << csv_ci(m.qd) << ',' << csv_ci(m.coverage) << ',' << csv_ci(m.best)
        << '\n';
  }
}

std::string render_report(const std::vector<RunSummary>& runs,
                          std::size_t resamples, std::uint64_t seed) {
  if (runs.empty()) throw ArgumentError("report needs at least one run");
  const std::string reference = archive_config_to_json(runs.front().archive).dump();
  for (const auto& r : runs) {
    if (archive_config_to_json(r.archive).dump() != reference) {
      throw StructuralError("run " + r.dir.string() +
                            " uses a different archive configuration");
    }
  }
  const auto methods = summarize_methods(runs, resamples, seed);
  std::ostringstream md;
  md << "# QD search report\n\n";
  md << runs.size() << " runs, " << methods.size() << " methods, "
     << runs.front().archive.total_bins() << " bins. Intervals are 95% "
     << "percentile bootstrap over per-run final values (" << resamples
     << " resamples).\n";

  auto table = [&](const char* title, auto member) {
    md << "\n## " << title << "\n\n";
    md << "| method | runs | mean | ci low | ci high |\n";
    md << "|---|---|---|---|---|\n";
    for (const auto& m : methods) {
      md << "| " << m.method << " | " << m.complete_runs << "/" << m.runs << " |"
         << ci_cells(m.*member) << "\n";
    }
  };
  table("QD score", &MethodSummary::qd);
  table("Coverage", &MethodSummary::coverage);
  table("Best quality", &MethodSummary::best);

  if (methods.size() >= 2) {
    md << "\n## Pairwise Mann-Whitney U on final QD score\n\n";
    md << "| method a | method b | U | p (two-sided) | exact |\n";
    md << "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < methods.size(); ++i) {
      for (std::size_t j = i + 1; j < methods.size(); ++j) {
        const auto& a = methods[i];
        const auto& b = methods[j];
        md << "| " << a.method << " | " << b.method << " |";
        if (a.qd_scores.empty() || b.qd_scores.empty()) {
          md << " n/a | n/a | n/a |\n";
          continue;
        }
        const auto mw = mann_whitney_u(a.qd_scores, b.qd_scores);
        md << " " << fmt(mw.u, "%g") << " | " << fmt(mw.p_two_sided) << " | "
           << (mw.exact ? "yes" : "no") << " |\n";
      }
    }
  }
  return md.str();
}

std::string render_heatmap_svg(const Archive& archive) {
  const auto& cfg = archive.config();
  if (cfg.axes.empty() || cfg.axes.size() > 2) {
    throw StructuralError("heatmaps need one or two archive axes");
  }
  const bool two_d = cfg.axes.size() == 2;
  const std::size_t nx = cfg.axes[0].bin_count();
  const std::size_t ny = two_d ? cfg.axes[1].bin_count() : 1;
  const int cell = nx > 40 ? 16 : 32;
  const int left = two_d ? 120 : 40;
  const int top = 40;
  const int bottom = 90;
  const int width = left + static_cast<int>(nx) * cell + 40;
  const int height = top + static_cast<int>(ny) * cell + bottom;
  const double span = cfg.fitness_high - cfg.fitness_low;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<style>.bin{stroke:#ffffff;stroke-width:1}"
         ".bin.empty{fill:#f0f0f0;stroke:#c8c8c8;stroke-dasharray:2 2}</style>\n";
  svg << "<text x=\"" << left << "\" y=\"20\" font-size=\"12\">"
      << escape_xml(cfg.axes[0].name())
      << (two_d ? " x " + escape_xml(cfg.axes[1].name()) : std::string())
      << " (QD score " << fmt(archive.qd_score()) << ", coverage "
      << fmt(archive.coverage()) << ")</text>\n";

  for (std::size_t yi = 0; yi < ny; ++yi) {
    for (std::size_t xi = 0; xi < nx; ++xi) {
      BinKey key;
      key.indices.push_back(xi);
      if (two_d) key.indices.push_back(yi);
      // Row 0 at the bottom so the second axis grows upwards.
      const int x = left + static_cast<int>(xi) * cell;
      const int y = top + static_cast<int>(ny - 1 - yi) * cell;
      const Individual* elite = archive.elite(key);
      svg << "<rect class=\"bin" << (elite ? "" : " empty") << "\" x=\"" << x
          << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" data-bin=\"" << xi << (two_d ? "," + std::to_string(yi) : "")
          << "\"";
      if (elite) {
        const double t = (elite->eval.quality - cfg.fitness_low) / span;
        svg << " fill=\"" << ramp(t) << "\" data-quality=\""
            << fmt_g(elite->eval.quality) << "\"><title>" << fmt(elite->eval.quality)
            << "</title></rect>\n";
      } else {
        svg << "/>\n";
      }
    }
  }

  auto labels_x = axis_tick_labels(cfg.axes[0]);
  const int base_y = top + static_cast<int>(ny) * cell;
  for (std::size_t i = 0; i < labels_x.size(); ++i) {
    const double pos = cfg.axes[0].is_continuous()
                           ? left + static_cast<double>(i) * cell
                           : left + (static_cast<double>(i) + 0.5) * cell;
    svg << "<text class=\"tick\" x=\"" << fmt(pos, "%g") << "\" y=\""
        << base_y + 12 << "\" text-anchor=\"end\" transform=\"rotate(-60 "
        << fmt(pos, "%g") << ' ' << base_y + 12 << ")\">"
        << escape_xml(labels_x[i]) << "</text>\n";
  }
  if (two_d) {
    auto labels_y = axis_tick_labels(cfg.axes[1]);
    for (std::size_t i = 0; i < labels_y.size(); ++i) {
      const double pos =
          cfg.axes[1].is_continuous()
              ? base_y - static_cast<double>(i) * cell
              : base_y - (static_cast<double>(i) + 0.5) * cell;
      svg << "<text class=\"tick\" x=\"" << left - 4 << "\" y=\""
          << fmt(pos + 3, "%g") << "\" text-anchor=\"end\">"
          << escape_xml(labels_y[i]) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qdaif
