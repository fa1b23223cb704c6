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

#include "qdaif/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>

#include "qdaif/errors.hpp"
#include "qdaif/rng.hpp"

namespace qdaif {
namespace {

// Walks a run log in the order it was written and keeps the archive in sync.
class Replayer {
 public:
  explicit Replayer(const RunLog& log)
      : log_(log),
        archive_(log.config.archive),
        rng_(derive_seed(log.config.seed, kArchiveStream)) {}

  // Applies remaps due before record i, then record i.
  void apply_record(std::size_t i) {
    const auto& rec = log_.records[i];
    apply_remaps_through(rec.iter);
    ++line_;
    if (rec.failed()) return;
    if (!rec.quality || !rec.descriptor || !rec.outcome) {
      throw ReplayError(line_, "successful iteration without evaluation");
    }
    Individual ind;
    ind.id = rec.id;
    ind.genotype.text = rec.text;
    ind.genotype.parent_ids = rec.parent_ids;
    ind.genotype.prompt_used = rec.prompt;
    ind.genotype.created_at_iter = rec.iter;
    ind.genotype.context = rec.context;
    ind.eval.quality = *rec.quality;
    ind.eval.descriptor = *rec.descriptor;
    InsertOutcome got;
    try {
      if (rec.bin && descriptor_to_binkey(*rec.descriptor, archive_.config()) !=
                         *rec.bin) {
        throw ReplayError(line_, "logged bin does not match the descriptor");
      }
      got = archive_.insert(std::move(ind), rng_);
    } catch (const ReplayError&) {
      throw;
    } catch (const Error& e) {
      throw ReplayError(line_, e.what());
    }
    if (got != *rec.outcome) {
      throw ReplayError(line_, "replayed outcome " + std::string(to_string(got)) +
                                   " differs from logged " +
                                   std::string(to_string(*rec.outcome)));
    }
  }

  void apply_remaps_through(std::uint64_t iter) {
    while (next_remap_ < log_.remaps.size() &&
           log_.remaps[next_remap_].iteration <= iter) {
      apply_remap(log_.remaps[next_remap_++]);
    }
  }

  void apply_all_remaps() {
    while (next_remap_ < log_.remaps.size()) apply_remap(log_.remaps[next_remap_++]);
  }

  const Archive& archive() const { return archive_; }

 private:
  void apply_remap(const RemapEvent& ev) {
    ++line_;
    std::map<IndividualId, Individual> members;
    for (const auto& [key, cell] : archive_.cells()) {
      for (const auto& m : cell.members) members.emplace(m.id, m);
    }
    Archive next(ev.archive);
    for (const auto& e : ev.entries) {
      auto it = members.find(e.id);
      if (it == members.end()) {
        throw ReplayError(line_, "remap names unknown individual " +
                                     std::to_string(e.id));
      }
      if (!e.error.empty()) continue;
      if (!e.descriptor || !e.outcome) {
        throw ReplayError(line_, "remap entry without descriptor or outcome");
      }
      Individual ind = it->second;
      ind.eval.descriptor = *e.descriptor;
      InsertOutcome got;
      try {
        got = next.insert(std::move(ind), rng_);
      } catch (const Error& err) {
        throw ReplayError(line_, err.what());
      }
      if (got != *e.outcome) {
        throw ReplayError(line_, "remap outcome differs for individual " +
                                     std::to_string(e.id));
      }
    }
    archive_ = std::move(next);
  }

  const RunLog& log_;
  Archive archive_;
  Rng rng_;
  std::size_t next_remap_ = 0;
  std::size_t line_ = 1;  // the header
};

MetricsPoint point_of(const Archive& a, std::uint64_t iter) {
  return {iter, a.qd_score(), a.coverage(), a.best_quality()};
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> midranks(const std::vector<double>& pooled) {
  std::vector<std::size_t> order(pooled.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> ranks(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Archive replay(const RunLog& log, std::optional<std::size_t> upto) {
  Replayer r(log);
  const std::size_t n = std::min(upto.value_or(log.records.size()), log.records.size());
  for (std::size_t i = 0; i < n; ++i) r.apply_record(i);
  if (!upto) r.apply_all_remaps();
  return r.archive();
}

MetricsTimeline timeline(const RunLog& log, std::size_t sample_every) {
  if (sample_every == 0) throw ArgumentError("sample_every must be positive");
  MetricsTimeline t;
  Replayer r(log);
  if (log.records.empty()) {
    r.apply_all_remaps();
    t.points.push_back(point_of(r.archive(), 0));
    return t;
  }
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    r.apply_record(i);
    const std::uint64_t executed = log.records[i].iter + 1;
    const bool last = i + 1 == log.records.size();
    if (last) r.apply_all_remaps();
    if (executed % sample_every == 0 || last) {
      t.points.push_back(point_of(r.archive(), executed));
    }
  }
  return t;
}

void write_metrics_csv(std::ostream& out, const MetricsTimeline& t) {
  out << "iter,qd_score,coverage,best_quality\n";
  char buf[128];
  for (const auto& p : t.points) {
    out << p.iter << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", p.qd_score, p.coverage);
    out << buf;
    if (p.best_quality) {
      std::snprintf(buf, sizeof buf, "%.17g", *p.best_quality);
      out << buf;
    }
    out << '\n';
  }
}

ConfidenceInterval bootstrap_ci(const std::vector<double>& samples,
                                std::size_t resamples, double level,
                                std::uint64_t seed, unsigned threads) {
  if (samples.empty()) throw ArgumentError("bootstrap needs at least one sample");
  if (resamples == 0) throw ArgumentError("resamples must be positive");
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("level must lie in (0, 1)");

  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / static_cast<double>(samples.size());

  constexpr std::size_t kShards = 64;
  const std::size_t shards = std::min(kShards, resamples);
  std::vector<double> means(resamples);
  auto run_shard = [&](std::size_t s) {
    const std::size_t begin = resamples * s / shards;
    const std::size_t end = resamples * (s + 1) / shards;
    Rng rng(splitmix64(seed ^ splitmix64(s + 1)));
    const std::size_t n = samples.size();
    for (std::size_t r = begin; r < end; ++r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += samples[rng.uniform_index(n)];
      means[r] = acc / static_cast<double>(n);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, shards));
  if (threads <= 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < shards; s += threads) run_shard(s);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - level;
  ConfidenceInterval ci;
  ci.mean = mean;
  ci.low = std::min(quantile(means, alpha / 2.0), mean);
  ci.high = std::max(quantile(means, 1.0 - alpha / 2.0), mean);
  return ci;
}

MannWhitney mann_whitney_u(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ArgumentError("Mann-Whitney needs two non-empty samples");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const double offset = static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;

  double ra = 0.0;
  for (std::size_t i = 0; i < na; ++i) ra += ranks[i];
  MannWhitney out;
  out.u = ra - offset;

  if (n <= 12) {
    out.exact = true;
    std::size_t total = 0;
    std::size_t le = 0;
    std::size_t ge = 0;
    constexpr double kEps = 1e-9;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != na) continue;
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) r += ranks[i];
      }
      const double u = r - offset;
      ++total;
      if (u <= out.u + kEps) ++le;
      if (u >= out.u - kEps) ++ge;
    }
    out.p_less = static_cast<double>(le) / static_cast<double>(total);
    out.p_greater = static_cast<double>(ge) / static_cast<double>(total);
  } else {
    std::map<double, std::size_t> ties;
    for (double v : pooled) ++ties[v];
    double tie_sum = 0.0;
    for (const auto& [v, t] : ties) {
      const auto td = static_cast<double>(t);
      tie_sum += td * td * td - td;
    }
    const double nad = static_cast<double>(na);
    const double nbd = static_cast<double>(nb);
    const double nd = static_cast<double>(n);
    const double mu = nad * nbd / 2.0;
    const double var =
        nad * nbd / 12.0 * ((nd + 1.0) - tie_sum / (nd * (nd - 1.0)));
    if (var <= 0.0) {
      out.p_less = out.p_greater = 1.0;
    } else {
      const double sd = std::sqrt(var);
      out.p_less = normal_cdf((out.u - mu + 0.5) / sd);
      out.p_greater = 1.0 - normal_cdf((out.u - mu - 0.5) / sd);
    }
  }
  out.p_less = std::min(out.p_less, 1.0);
  out.p_greater = std::min(out.p_greater, 1.0);
  out.p_two_sided = std::min(1.0, 2.0 * std::min(out.p_less, out.p_greater));
  return out;
}

}  // namespace qdaif
