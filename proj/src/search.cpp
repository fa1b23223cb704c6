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

#include "qdaif/search.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <utility>

#include "qdaif/errors.hpp"

namespace qdaif {
namespace {

struct MethodName {
  Method method;
  std::string_view name;
};

constexpr std::array<MethodName, 14> kMethodNames{{
    {Method::kQdaifLmxNear, "qdaif-lmx-near"},
    {Method::kQdaifLmxReplace, "qdaif-lmx-replace"},
    {Method::kQdaifRewrite, "qdaif-rewrite"},
    {Method::kQdaifGuided, "qdaif-guided"},
    {Method::kFixedFewShot, "fixed-few-shot"},
    {Method::kShufflingFewShot, "shuffling-few-shot"},
    {Method::kRandomSearch, "random-search"},
    {Method::kQualityOnly, "quality-only"},
    {Method::kRougeFilter, "rouge-filter"},
    {Method::kNsaif, "nsaif"},
    {Method::kRougeFilterQaif, "rouge-filter+qaif"},
    {Method::kNsaifQaif, "nsaif+qaif"},
    {Method::kRandomFresh, "random-fresh"},
    {Method::kTargetedFresh, "targeted-fresh"},
}};

bool is_fresh(Method m) {
  return m == Method::kRandomFresh || m == Method::kTargetedFresh;
}

bool needs_targets(Method m) {
  return m == Method::kQdaifGuided || m == Method::kTargetedFresh;
}

bool is_rouge(Method m) {
  return m == Method::kRougeFilter || m == Method::kRougeFilterQaif;
}

bool is_nsaif(Method m) { return m == Method::kNsaif || m == Method::kNsaifQaif; }

bool is_gated(Method m) {
  return m == Method::kRougeFilterQaif || m == Method::kNsaifQaif;
}

// Errors that end the run rather than the iteration.
bool is_fatal(const std::exception& e) {
  return dynamic_cast<const BackendError*>(&e) != nullptr ||
         dynamic_cast<const ScriptExhaustedError*>(&e) != nullptr ||
         dynamic_cast<const CapabilityError*>(&e) != nullptr;
}

std::vector<const CategoricalAxis*> categorical_axes(const ArchiveConfig& c) {
  std::vector<const CategoricalAxis*> out;
  for (const auto& axis : c.axes) {
    if (!axis.is_continuous()) out.push_back(&axis.categorical());
  }
  return out;
}

class Loop {
 public:
  Loop(const RunConfig& cfg, Backend& backend, const RunObserver& observer)
      : cfg_(cfg),
        backend_(backend),
        observer_(observer),
        select_(derive_seed(cfg.seed, kSelectionStream)),
        archive_rng_(derive_seed(cfg.seed, kArchiveStream)),
        archive_(cfg.archive),
        novelty_{cfg.novelty.initial_threshold, 0, 0} {
    seed_pool_ = pool_from_texts(cfg.seed_texts, cfg.archive.fitness_low);
    pool_ = seed_pool_;
    init_iterations_ =
        (is_qdaif(cfg.method) || cfg.baseline_init) ? cfg.init_iterations : 0;
    if (cfg.init == InitMode::kZeroShot) {
      seed_pool_.entries.clear();
      pool_.entries.clear();
    }
  }

  RunLog execute() {
    RunLog log;
    log.config = cfg_;
    std::size_t next_schedule = 0;
    try {
      for (std::uint64_t t = 0; t < cfg_.iterations; ++t) {
        while (next_schedule < cfg_.schedule.size() &&
               cfg_.schedule[next_schedule].iteration == t) {
          log.remaps.push_back(apply_schedule(cfg_.schedule[next_schedule], t));
          if (observer_.on_remap) observer_.on_remap(log.remaps.back());
          ++next_schedule;
        }
        if (t == init_iterations_) on_init_done();
        IterationRecord rec = step(t);
        if (observer_.on_record) observer_.on_record(rec);
        log.records.push_back(std::move(rec));
        if (fatal_) break;
      }
    } catch (const std::exception& e) {
      if (!is_fatal(e)) throw;
      fatal_ = true;
      abort_reason_ = e.what();
    }
    log.complete = !fatal_;
    log.abort_reason = abort_reason_;
    log.clamped_ratings = fstats_.clamped_ratings;
    log.archive = std::move(archive_);
    return log;
  }

 private:
  RemapEvent apply_schedule(const ScheduleEntry& entry, std::uint64_t t) {
    RemapEvent ev;
    ev.iteration = t;
    ev.archive = entry.archive;
    auto reevaluate = [this](const Individual& ind, const AxisSpec& axis) {
      return evaluate_axis(ind.genotype, axis, backend_, cfg_.judge);
    };
    archive_ = remap(archive_, entry.archive, reevaluate, archive_rng_,
                     &ev.entries);
    // Stored novelty coordinates refer to the old axes.
    for (auto& e : pool_.entries) e.novelty_coords.clear();
    if (cfg_.method == Method::kQdaifLmxReplace) refresh_replace_pool();
    return ev;
  }

  void on_init_done() {
    if (cfg_.method == Method::kQdaifLmxReplace) refresh_replace_pool();
  }

  void refresh_replace_pool() {
    replace_pool_ = update_pool(std::move(replace_pool_), {},
                                TopPerBin{&archive_, cfg_.replace_pool_depth});
  }

  struct Generation {
    std::string prompt;
    std::vector<std::string> context;
    std::vector<IndividualId> parents;
    bool chat = false;
  };

  Generation plan(std::uint64_t t, IterationRecord& rec) {
    const Method m = cfg_.method;
    const bool init = t < init_iterations_;
    Generation g;

    if (cfg_.init == InitMode::kZeroShot && t < cfg_.zero_shot_pool_size &&
        (init || !is_qdaif(m))) {
      if (uses_chat(m)) {
        g.chat = true;
        g.prompt = rewrite_prompt(std::nullopt, {}, {}, RewriteMode::kRandomFresh,
                                  cfg_.rewrite);
      } else {
        g.prompt = zero_shot_init_prompt(cfg_.lmx);
      }
      return g;
    }

    if (is_fresh(m)) {
      g.chat = true;
      if (m == Method::kRandomFresh) {
        g.prompt = rewrite_prompt(std::nullopt, {}, {}, RewriteMode::kRandomFresh,
                                  cfg_.rewrite);
      } else {
        g.prompt = rewrite_prompt(std::nullopt, {}, draw_targets(),
                                  RewriteMode::kTargetedFresh, cfg_.rewrite);
      }
      return g;
    }

    if (init) {
      if (uses_chat(m)) {
        // Seed texts carry no labels, so guided runs also rewrite here.
        g.chat = true;
        const auto& seed =
            seed_pool_.entries.at(select_.uniform_index(seed_pool_.size()));
        g.prompt = rewrite_prompt(seed.genotype.text, {}, {},
                                  RewriteMode::kRewrite, cfg_.rewrite);
        return g;
      }
      g.context = sample_context(seed_pool_,
                                 std::min(cfg_.lmx.few_shot_count,
                                          seed_pool_.size()),
                                 select_)
                      .examples;
      g.prompt = render_lmx_prompt({g.context}, cfg_.lmx);
      return g;
    }

    switch (m) {
      case Method::kQdaifLmxNear: {
        g.context =
            lmx_near(archive_, seed_pool_, cfg_.lmx, select_, &g.parents)
                .examples;
        break;
      }
      case Method::kQdaifLmxReplace: {
        const Individual parent = pick_parent();
        g.parents.push_back(parent.id);
        const PromptPool& source =
            replace_pool_.size() >= cfg_.lmx.few_shot_count ? replace_pool_
                                                            : seed_pool_;
        if (parent.genotype.context.empty()) {
          g.context =
              sample_context(source,
                             std::min(cfg_.lmx.few_shot_count, source.size()),
                             select_)
                  .examples;
        } else {
          auto r = lmx_replace({parent.genotype.context}, source, select_);
          rec.context_unchanged = !r.replaced;
          g.context = std::move(r.context.examples);
        }
        break;
      }
      case Method::kQdaifRewrite:
      case Method::kQdaifGuided: {
        const Individual parent = pick_parent();
        g.parents.push_back(parent.id);
        g.chat = true;
        if (m == Method::kQdaifRewrite) {
          g.prompt = rewrite_prompt(parent.genotype.text, {}, {},
                                    RewriteMode::kRewrite, cfg_.rewrite);
        } else {
          std::map<std::string, std::string> parent_labels;
          const auto& axes = archive_.config().axes;
          for (std::size_t i = 0; i < axes.size(); ++i) {
            if (axes[i].is_continuous()) continue;
            const auto& cat = axes[i].categorical();
            const auto idx = std::get<Categorical>(
                                 parent.eval.descriptor.coords.at(i))
                                 .index;
            parent_labels[cat.key] = cat.labels.at(idx);
          }
          g.prompt = rewrite_prompt(parent.genotype.text, parent_labels,
                                    draw_targets(), RewriteMode::kGuided,
                                    cfg_.rewrite);
        }
        return g;
      }
      case Method::kFixedFewShot:
      case Method::kShufflingFewShot: {
        const std::size_t k =
            std::min(cfg_.lmx.few_shot_count, seed_pool_.size());
        for (std::size_t i = 0; i < k; ++i) {
          g.context.push_back(seed_pool_.entries[i].genotype.text);
        }
        if (m == Method::kShufflingFewShot) select_.shuffle(g.context);
        break;
      }
      default: {
        g.context = sample_context(
                        pool_, std::min(cfg_.lmx.few_shot_count, pool_.size()),
                        select_)
                        .examples;
        break;
      }
    }
    g.prompt = render_lmx_prompt({g.context}, cfg_.lmx);
    return g;
  }

  Individual pick_parent() {
    auto elites = archive_.sample_elites(1, select_);
    if (elites.empty()) throw InsufficientParentsError("archive is empty");
    return std::move(elites.front());
  }

  std::map<std::string, std::string> draw_targets() {
    std::map<std::string, std::string> out;
    for (const auto* axis : categorical_axes(archive_.config())) {
      out[axis->key] = axis->labels[select_.uniform_index(axis->labels.size())];
    }
    return out;
  }

  IterationRecord step(std::uint64_t t) {
    IterationRecord rec;
    rec.iter = t;
    rec.init_phase = t < init_iterations_;
    rec.id = t + 1;
    try {
      Generation g = plan(t, rec);
      rec.prompt = g.prompt;
      rec.context = g.context;
      rec.parent_ids = g.parents;
      if (g.chat) {
        rec.text = backend_.chat({{"user", g.prompt}}, cfg_.sampling);
      } else {
        rec.text = backend_.complete(g.prompt, cfg_.sampling);
      }
      const bool zero_shot =
          cfg_.init == InitMode::kZeroShot && t < cfg_.zero_shot_pool_size &&
          (rec.init_phase || !is_qdaif(cfg_.method));
      if (zero_shot) {
        PoolEntry e;
        e.genotype.text = rec.text;
        e.quality = cfg_.archive.fitness_low;
        seed_pool_.entries.push_back(e);
      }

      Individual ind;
      ind.id = rec.id;
      ind.genotype.text = rec.text;
      ind.genotype.parent_ids = rec.parent_ids;
      ind.genotype.prompt_used = rec.prompt;
      ind.genotype.created_at_iter = t;
      ind.genotype.context = rec.context;
      ind.eval = evaluate(ind.genotype, archive_.config(), cfg_.quality,
                          backend_, cfg_.judge, &fstats_);
      rec.quality = ind.eval.quality;
      rec.descriptor = ind.eval.descriptor;
      rec.feedback = ind.eval.raw;
      rec.bin = descriptor_to_binkey(ind.eval.descriptor, archive_.config());

      PoolEntry entry;
      entry.genotype = ind.genotype;
      entry.quality = ind.eval.quality;
      entry.novelty_coords = uniformized(ind.eval.descriptor, archive_.config());

      rec.outcome = archive_.insert(std::move(ind), archive_rng_);
      if (zero_shot) {
        pool_.entries.push_back(std::move(entry));
      } else {
        apply_pool_rule(rec, std::move(entry));
      }
    } catch (const std::exception& e) {
      if (is_fatal(e)) {
        fatal_ = true;
        abort_reason_ = e.what();
      }
      const auto* lib = dynamic_cast<const Error*>(&e);
      if (lib == nullptr) throw;
      rec.error = e.what();
      rec.quality.reset();
      rec.descriptor.reset();
      rec.bin.reset();
      rec.outcome.reset();
    }
    rec.pool_size = current_pool_size();
    if (is_nsaif(cfg_.method)) rec.threshold = novelty_.threshold;
    return rec;
  }

  std::size_t current_pool_size() const {
    switch (cfg_.method) {
      case Method::kQdaifLmxNear:
      case Method::kFixedFewShot:
      case Method::kShufflingFewShot:
        return seed_pool_.size();
      case Method::kQdaifLmxReplace:
        return replace_pool_.size();
      case Method::kQdaifRewrite:
      case Method::kQdaifGuided:
      case Method::kRandomFresh:
      case Method::kTargetedFresh:
        return 0;
      default:
        return pool_.size();
    }
  }

  void apply_pool_rule(IterationRecord& rec, PoolEntry entry) {
    const Method m = cfg_.method;
    const bool gate_ok =
        !is_gated(m) || entry.quality > cfg_.quality_gate;
    const PoolPolicy gated_policy = QualityTopK{cfg_.gated_pool_capacity};
    switch (m) {
      case Method::kQdaifLmxReplace:
        if (admitted(*rec.outcome) && !rec.init_phase) refresh_replace_pool();
        return;
      case Method::kRandomSearch:
        pool_ = update_pool(std::move(pool_), std::move(entry), Unbounded{});
        rec.pool_admitted = true;
        return;
      case Method::kQualityOnly: {
        // Ties at the cut keep the older entry.
        const bool room = pool_.size() < cfg_.quality_pool_capacity;
        const bool better =
            !pool_.entries.empty() &&
            entry.quality > pool_.entries.back().quality;
        rec.pool_admitted = room || better;
        pool_ = update_pool(std::move(pool_), std::move(entry),
                            QualityTopK{cfg_.quality_pool_capacity});
        return;
      }
      default:
        break;
    }
    if (is_rouge(m)) {
      const auto cand = tokenize(entry.genotype.text);
      double best = 0.0;
      for (const auto& e : pool_.entries) {
        best = std::max(best, rouge_l(cand, tokenize(e.genotype.text)));
      }
      rec.rouge = best;
      const bool ok = best <= cfg_.rouge_threshold && gate_ok;
      rec.pool_admitted = ok;
      if (ok) {
        pool_ = update_pool(std::move(pool_), std::move(entry),
                            is_gated(m) ? gated_policy : PoolPolicy{Unbounded{}});
      }
      return;
    }
    if (is_nsaif(m)) {
      std::vector<std::vector<double>> others;
      for (const auto& e : pool_.entries) {
        if (!e.novelty_coords.empty()) others.push_back(e.novelty_coords);
      }
      const double nov = novelty(entry.novelty_coords, others, cfg_.novelty.k);
      rec.novelty = nov;
      const bool ok = nov > novelty_.threshold && gate_ok;
      rec.pool_admitted = ok;
      novelty_ = update_threshold(novelty_, ok, cfg_.novelty);
      if (ok) {
        pool_ = update_pool(std::move(pool_), std::move(entry),
                            is_gated(m) ? gated_policy : PoolPolicy{Unbounded{}});
      }
    }
  }

  const RunConfig& cfg_;
  Backend& backend_;
  const RunObserver& observer_;
  Rng select_;
  Rng archive_rng_;
  Archive archive_;
  PromptPool seed_pool_;
  PromptPool pool_;
  PromptPool replace_pool_;
  NoveltyState novelty_;
  FeedbackStats fstats_;
  std::size_t init_iterations_ = 0;
  bool fatal_ = false;
  std::string abort_reason_;
};

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& m : kMethodNames) {
    if (m.method == method) return m.name;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (const auto& m : kMethodNames) {
    if (m.name == name) return m.method;
  }
  throw ArgumentError("unknown method '" + std::string(name) + "'");
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& m : kMethodNames) out.push_back(m.method);
  return out;
}

bool is_qdaif(Method method) {
  return method == Method::kQdaifLmxNear || method == Method::kQdaifLmxReplace ||
         method == Method::kQdaifRewrite || method == Method::kQdaifGuided;
}

bool uses_chat(Method method) {
  return method == Method::kQdaifRewrite || method == Method::kQdaifGuided ||
         is_fresh(method);
}

std::string_view to_string(InitMode mode) {
  return mode == InitMode::kSeeded ? "seeded" : "zero-shot";
}

InitMode init_mode_from_string(std::string_view name) {
  if (name == "seeded") return InitMode::kSeeded;
  if (name == "zero-shot") return InitMode::kZeroShot;
  throw ArgumentError("unknown init mode '" + std::string(name) + "'");
}

NoveltyState update_threshold(NoveltyState s, bool accepted,
                              const NoveltyParams& params) {
  if (accepted) {
    s.consecutive_rejects = 0;
    if (++s.consecutive_accepts >= params.accept_streak) {
      s.threshold *= params.raise_factor;
      s.consecutive_accepts = 0;
    }
  } else {
    s.consecutive_accepts = 0;
    if (++s.consecutive_rejects >= params.reject_streak) {
      s.threshold *= params.lower_factor;
      s.consecutive_rejects = 0;
    }
  }
  return s;
}

double novelty(const std::vector<double>& candidate,
               const std::vector<std::vector<double>>& pool, std::size_t k) {
  if (k == 0) throw ArgumentError("novelty k must be positive");
  if (pool.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> dist;
  dist.reserve(pool.size());
  for (const auto& p : pool) {
    if (p.size() != candidate.size()) {
      throw ArgumentError("novelty: dimension mismatch");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - candidate[i];
      sq += d * d;
    }
    dist.push_back(std::sqrt(sq));
  }
  const std::size_t n = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(n),
                    dist.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += dist[i];
  return sum / static_cast<double>(n);
}

std::vector<double> uniformized(const DiversityDescriptor& d,
                                const ArchiveConfig& config) {
  validate_descriptor(d, config);
  std::vector<double> out;
  out.reserve(d.coords.size());
  for (std::size_t i = 0; i < d.coords.size(); ++i) {
    const auto& axis = config.axes[i];
    if (axis.is_continuous()) {
      out.push_back(to_uniform(std::get<Continuous>(d.coords[i]).value,
                               axis.continuous().grid));
    } else {
      const auto n = static_cast<double>(axis.bin_count());
      out.push_back((static_cast<double>(std::get<Categorical>(d.coords[i]).index) +
                     0.5) /
                    n);
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::vector<std::size_t> prev(reference.size() + 1, 0);
  std::vector<std::size_t> cur(reference.size() + 1, 0);
  for (std::size_t i = 1; i <= candidate.size(); ++i) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1]
                   ? prev[j - 1] + 1
                   : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const auto lcs = static_cast<double>(prev[reference.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

void validate_run_config(const RunConfig& c) {
  auto fail = [](const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
  };
  auto wrap = [&](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path, e.what());
    }
  };
  if (c.iterations == 0) fail("run.iterations", "must be positive");
  if (c.init_iterations > c.iterations) {
    fail("run.init_iterations", "exceeds run.iterations");
  }
  wrap("archive", [&] { validate_archive_config(c.archive); });
  if (c.archive.axes.empty()) fail("archive.axes", "at least one axis is required");

  const bool lmx = !uses_chat(c.method);
  if (lmx) wrap("mutation", [&] { validate_template(c.lmx); });
  if (c.init == InitMode::kSeeded && !is_fresh(c.method) &&
      c.seed_texts.empty()) {
    fail("seeds.texts", "seeded initialization needs at least one seed text");
  }
  if (c.init == InitMode::kZeroShot) {
    if (c.zero_shot_pool_size == 0) {
      fail("run.zero_shot_pool_size", "must be positive");
    }
    if (c.init_iterations < c.zero_shot_pool_size) {
      fail("run.init_iterations",
           "zero-shot initialization needs init_iterations >= "
           "zero_shot_pool_size");
    }
  }
  for (std::size_t i = 0; i < c.seed_texts.size(); ++i) {
    const std::string path = "seeds.texts[" + std::to_string(i) + "]";
    if (trim(c.seed_texts[i]).empty()) fail(path, "seed text is empty");
    if (lmx && c.seed_texts[i].find(c.lmx.separator) != std::string::npos) {
      fail(path, "seed text contains the few-shot separator");
    }
  }
  if (needs_targets(c.method) && categorical_axes(c.archive).empty()) {
    fail("archive.axes", std::string(to_string(c.method)) +
                             " needs at least one categorical axis");
  }
  if (c.sampling.max_tokens < 1) fail("sampling.max_tokens", "must be >= 1");
  if (c.sampling.temperature < 0) fail("sampling.temperature", "must be >= 0");
  if (!(c.sampling.top_p > 0 && c.sampling.top_p <= 1)) {
    fail("sampling.top_p", "must lie in (0, 1]");
  }
  if (c.judge.max_tokens < 1) fail("judge.max_tokens", "must be >= 1");

  std::visit(
      [&](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, BinaryQuality>) {
          if (q.eval_instruction.empty()) {
            fail("quality.eval_instruction", "is required");
          }
          if (q.yes_label.empty() || q.no_label.empty() ||
              q.yes_label == q.no_label) {
            fail("quality.labels", "need two distinct non-empty labels");
          }
          if (c.archive.fitness_low > 0.0 || c.archive.fitness_high < 1.0) {
            fail("archive.fitness_range", "must contain [0, 1]");
          }
        } else if constexpr (std::is_same_v<T, RatingQuality>) {
          if (q.prompt.empty()) fail("quality.prompt", "is required");
          if (q.min >= q.max) fail("quality.min", "must be below quality.max");
          if (q.min < c.archive.fitness_low || q.max > c.archive.fitness_high) {
            fail("archive.fitness_range", "must contain the rating range");
          }
        } else {
          if (q.query.empty()) fail("quality.query", "is required");
          if (c.archive.fitness_low > 0.0 || c.archive.fitness_high < 1.0) {
            fail("archive.fitness_range", "must contain [0, 1]");
          }
        }
      },
      c.quality.kind);

  for (std::size_t i = 0; i < c.archive.axes.size(); ++i) {
    const auto& axis = c.archive.axes[i];
    const std::string path = "archive.axes[" + std::to_string(i) + "]";
    if (axis.is_continuous()) {
      const auto& ca = axis.continuous();
      if (ca.feedback == AxisFeedback::kLogprob && ca.eval_instruction.empty()) {
        fail(path + ".eval_instruction", "is required");
      }
      if (ca.feedback == AxisFeedback::kEmbedding &&
          (ca.query_low.empty() || ca.query_high.empty())) {
        fail(path + ".queries", "embedding axes need two queries");
      }
    } else if (axis.categorical().key.empty()) {
      fail(path + ".key", "is required");
    }
  }

  std::uint64_t last = 0;
  for (std::size_t i = 0; i < c.schedule.size(); ++i) {
    const auto& s = c.schedule[i];
    const std::string path = "schedule[" + std::to_string(i) + "]";
    if (s.iteration >= c.iterations) fail(path + ".iteration", "beyond the run");
    if (i > 0 && s.iteration < last) fail(path + ".iteration", "out of order");
    last = s.iteration;
    wrap(path + ".archive", [&] { validate_archive_config(s.archive); });
    if (needs_targets(c.method) && categorical_axes(s.archive).empty()) {
      fail(path + ".archive.axes", "needs a categorical axis");
    }
  }

  if (c.novelty.k == 0) fail("baselines.novelty_k", "must be positive");
  if (!(c.novelty.initial_threshold > 0)) {
    fail("baselines.novelty_threshold", "must be positive");
  }
  if (!(c.novelty.raise_factor > 0) || !(c.novelty.lower_factor > 0)) {
    fail("baselines.novelty_factors", "must be positive");
  }
  if (c.novelty.accept_streak == 0 || c.novelty.reject_streak == 0) {
    fail("baselines.novelty_streaks", "must be positive");
  }
  if (c.rouge_threshold < 0 || c.rouge_threshold > 1) {
    fail("baselines.rouge_threshold", "must lie in [0, 1]");
  }
  if (c.gated_pool_capacity == 0) fail("baselines.gated_pool_capacity", "must be positive");
  if (c.quality_pool_capacity == 0) fail("baselines.quality_pool_capacity", "must be positive");
  if (c.replace_pool_depth == 0) fail("mutation.replace_pool_depth", "must be positive");
}

RunLog run(const RunConfig& config, Backend& backend,
           const RunObserver& observer) {
  validate_run_config(config);
  Loop loop(config, backend, observer);
  return loop.execute();
}

}  // namespace qdaif
