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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "qdaif/archive.hpp"
#include "qdaif/binning.hpp"
#include "qdaif/config.hpp"
#include "qdaif/errors.hpp"
#include "qdaif/feedback.hpp"
#include "qdaif/report.hpp"
#include "qdaif/search.hpp"
#include "qdaif/serialize.hpp"
#include "qdaif/stats.hpp"

namespace py = pybind11;
using namespace qdaif;

namespace {

TickGrid grid_arg(const py::object& grid) {
  if (py::isinstance<py::str>(grid)) return TickGrid::preset(grid.cast<std::string>());
  return TickGrid(grid.cast<std::vector<double>>());
}

py::list timeline_rows(const RunLog& log, std::size_t every) {
  py::list rows;
  for (const auto& p : timeline(log, every).points) {
    rows.append(py::make_tuple(p.iter, p.qd_score, p.coverage, p.best_quality));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_qdaif, m) {
  m.doc() = "QDAIF core bindings";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ReplayError>(m, "ReplayError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());

  py::class_<RunConfig>(m, "RunConfig")
      .def_property(
          "method", [](const RunConfig& c) { return std::string(to_string(c.method)); },
          [](RunConfig& c, const std::string& s) { c.method = method_from_string(s); })
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("iterations", &RunConfig::iterations)
      .def_readwrite("init_iterations", &RunConfig::init_iterations)
      .def("validate", &validate_run_config)
      .def("to_json", [](const RunConfig& c) { return config_to_json(c).dump(); });

  m.def(
      "load_config",
      [](const std::filesystem::path& path, std::vector<std::string> overrides,
         std::optional<std::uint64_t> seed, std::optional<std::string> backend) {
        return load_config(path, LoadOptions{std::move(overrides), seed, std::move(backend)});
      },
      py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
      py::arg("seed") = py::none(), py::arg("backend") = py::none());

  py::class_<RunLog>(m, "RunLog")
      .def_readonly("complete", &RunLog::complete)
      .def_readonly("abort_reason", &RunLog::abort_reason)
      .def_property_readonly("iterations", [](const RunLog& l) { return l.records.size(); })
      .def_property_readonly("qd_score",
                             [](const RunLog& l) { return l.archive ? l.archive->qd_score() : 0.0; })
      .def_property_readonly("coverage",
                             [](const RunLog& l) { return l.archive ? l.archive->coverage() : 0.0; })
      .def_property_readonly("best_quality",
                             [](const RunLog& l) -> std::optional<double> {
                               if (!l.archive) return std::nullopt;
                               return l.archive->best_quality();
                             })
      .def("archive_json",
           [](const RunLog& l) { return l.archive ? archive_to_json(*l.archive).dump() : "null"; })
      .def("runlog_jsonl",
           [](const RunLog& l) {
             std::ostringstream out;
             write_runlog(out, l);
             return out.str();
           })
      .def("timeline", &timeline_rows, py::arg("every") = 1)
      .def("replay_qd_score", [](const RunLog& l) { return replay(l).qd_score(); });

  m.def(
      "run",
      [](const RunConfig& c) {
        auto backend = make_run_backend(c);
        py::gil_scoped_release release;
        return run(c, *backend);
      },
      py::arg("config"));
  m.def(
      "run_to_directory",
      [](const RunConfig& c, const std::filesystem::path& dir, std::size_t every) {
        py::gil_scoped_release release;
        return run_to_directory(c, dir, every);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("sample_every") = 1);
  m.def(
      "read_runlog",
      [](const std::filesystem::path& p) {
        RunLog log = read_runlog(p);
        if (!log.archive) log.archive = replay(log);
        return log;
      },
      py::arg("path"));
  m.def(
      "render_report",
      [](const std::vector<std::filesystem::path>& dirs, std::size_t resamples,
         std::uint64_t seed) {
        std::vector<RunSummary> runs;
        for (const auto& d : dirs) runs.push_back(summarize_run(d));
        return render_report(runs, resamples, seed);
      },
      py::arg("run_dirs"), py::arg("resamples") = 100000, py::arg("seed") = 0);
  m.def(
      "render_heatmap_svg",
      [](const std::filesystem::path& archive_json) {
        return render_heatmap_svg(read_archive(archive_json));
      },
      py::arg("archive_path"));
  m.def("methods", [] {
    std::vector<std::string> out;
    for (auto mth : all_methods()) out.emplace_back(to_string(mth));
    return out;
  });
  m.def("config_schema", [] { return config_schema().dump(); });

  m.def(
      "to_uniform", [](double v, const py::object& grid) { return to_uniform(v, grid_arg(grid)); },
      py::arg("value"), py::arg("grid") = "paper-1d-20");
  m.def(
      "bin_index", [](double v, const py::object& grid) { return bin_index(v, grid_arg(grid)); },
      py::arg("value"), py::arg("grid") = "paper-1d-20");
  m.def("tokenize", [](const std::string& s) { return tokenize(s); });
  m.def(
      "rouge_l",
      [](const std::string& candidate, const std::string& reference) {
        return rouge_l(tokenize(candidate), tokenize(reference));
      },
      py::arg("candidate"), py::arg("reference"));
  m.def("build_feedback_prompt", &build_feedback_prompt, py::arg("instruction"),
        py::arg("text"));
  m.def(
      "bootstrap_ci",
      [](const std::vector<double>& xs, std::size_t resamples, double level, std::uint64_t seed) {
        const auto ci = bootstrap_ci(xs, resamples, level, seed);
        return py::make_tuple(ci.low, ci.mean, ci.high);
      },
      py::arg("samples"), py::arg("resamples") = 100000, py::arg("level") = 0.95,
      py::arg("seed") = 0);
  m.def(
      "mann_whitney_u",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const auto r = mann_whitney_u(a, b);
        py::dict d;
        d["u"] = r.u;
        d["p_two_sided"] = r.p_two_sided;
        d["p_less"] = r.p_less;
        d["p_greater"] = r.p_greater;
        d["exact"] = r.exact;
        return d;
      },
      py::arg("a"), py::arg("b"));
}
