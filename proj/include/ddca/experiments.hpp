#pragma once

// Experiment harness: full pipeline runs, cell-count and signal-shift
// sweeps, and the engine-vs-oracle equivalence campaign.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ddca/engine.hpp"
#include "ddca/errors.hpp"
#include "ddca/events.hpp"
#include "ddca/lcg.hpp"
#include "ddca/metrics.hpp"
#include "ddca/oracle.hpp"
#include "ddca/results_io.hpp"
#include "ddca/scenario.hpp"

namespace ddca {

inline constexpr std::array<std::size_t, 8> kDefaultCellCounts{1, 5, 10, 50, 100, 500, 1000, 5000};

/// -20, -18, ..., +20 seconds.
inline std::vector<double> default_shift_offsets() {
  std::vector<double> out;
  for (int s = -20; s <= 20; s += 2) out.push_back(static_cast<double>(s));
  return out;
}

struct RunOutcome {
  EngineConfig config;
  RunLog log;
  Analysis analysis;
  double wall_time_ms = 0.0;
};

/// Engine run plus metrics. The wall time covers the engine loop only.
inline RunOutcome run_pipeline(const EventStream& stream, const EngineConfig& config,
                               const AnalysisOptions& options = {}) {
  RunOutcome out;
  out.config = config;
  const auto start = std::chrono::steady_clock::now();
  out.log = run_stream(config, stream.events);
  const auto stop = std::chrono::steady_clock::now();
  out.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  const auto signals = stream.signals();
  out.analysis = analyze(out.log, signals, config, options);
  return out;
}

/// Minimum engine wall time over several repeats, in milliseconds.
inline double time_engine(const EventStream& stream, const EngineConfig& config, int repeats) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const RunLog log = run_stream(config, stream.events);
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return best;
}

struct SweepRow {
  double swept_value = 0.0;
  std::optional<RunOutcome> outcome;
  std::string error;
};

struct SweepResult {
  std::string parameter;  // "num_cells" or "offset"
  std::vector<SweepRow> rows;
};

struct SweepOptions {
  AnalysisOptions analysis;
  // Run rows concurrently. Wall times then include contention.
  bool parallel = false;
};

namespace detail {

template <typename Job>
SweepResult run_sweep(std::string parameter, std::vector<double> values, const SweepOptions& options, Job job) {
  std::stable_sort(values.begin(), values.end());
  SweepResult result;
  result.parameter = std::move(parameter);
  result.rows.resize(values.size());

  const auto run_row = [&](std::size_t i) {
    SweepRow row;
    row.swept_value = values[i];
    try {
      row.outcome = job(values[i]);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  if (options.parallel) {
    std::vector<std::future<SweepRow>> futures;
    for (std::size_t i = 0; i < values.size(); ++i) futures.push_back(std::async(std::launch::async, run_row, i));
    for (std::size_t i = 0; i < values.size(); ++i) result.rows[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) result.rows[i] = run_row(i);
  }
  return result;
}

}  // namespace detail

inline SweepResult sweep_cell_numbers(const EventStream& stream, std::span<const std::size_t> counts,
                                      const EngineConfig& base, const SweepOptions& options = {}) {
  std::vector<double> values;
  for (auto c : counts) values.push_back(static_cast<double>(c));
  return detail::run_sweep("num_cells", std::move(values), options, [&](double n) {
    EngineConfig config = base;
    config.num_cells = static_cast<std::size_t>(n);
    return run_pipeline(stream, config, options.analysis);
  });
}

inline SweepResult sweep_time_shifts(const EventStream& stream, std::span<const double> offsets,
                                     const EngineConfig& config, const SweepOptions& options = {}) {
  return detail::run_sweep("offset", {offsets.begin(), offsets.end()}, options, [&](double offset) {
    if (offset == 0.0) return run_pipeline(stream, config, options.analysis);
    return run_pipeline(shift_signals(stream, offset).stream, config, options.analysis);
  });
}

/// One row per swept value; per-type columns for every type seen in any row.
inline std::string write_sweep_summary(const SweepResult& sweep) {
  std::set<std::string> types;
  for (const auto& row : sweep.rows) {
    if (!row.outcome) continue;
    for (const auto& r : row.outcome->analysis.reports) types.insert(r.antigen_type);
  }

  std::string out = sweep.parameter + ",status,t_k,mcav_threshold,mean_iterations,mean_incarnations,wall_time_ms";
  for (const auto& t : types) out += ",mcav:" + t + ",k_alpha:" + t;
  out += '\n';

  for (const auto& row : sweep.rows) {
    out += sweep.parameter == "num_cells" ? std::to_string(static_cast<std::size_t>(row.swept_value))
                                          : format_decimal(row.swept_value);
    if (!row.outcome) {
      out += ",error,NA,NA,NA,NA,NA";
      for (std::size_t i = 0; i < types.size(); ++i) out += ",NA,NA";
      out += '\n';
      continue;
    }
    const Analysis& a = row.outcome->analysis;
    out += ",ok";
    out += ',' + format_optional(a.thresholds.t_k);
    out += ',' + format_optional(a.thresholds.mcav_threshold);
    out += ',' + format_optional(a.stats.mean_iterations);
    out += ',' + format_optional(a.stats.mean_incarnations);
    out += ',' + format_decimal(row.outcome->wall_time_ms);
    for (const auto& t : types) {
      const AntigenTypeReport* r = find_report(a, t);
      out += ',' + format_optional(r ? r->mcav : std::nullopt);
      out += ',' + format_optional(r ? r->k_alpha : std::nullopt);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle equivalence campaign

struct SmallCase {
  EngineConfig config;
  std::vector<Event> events;
};

/// A random instance with at most max_events events, N <= max_cells and an
/// integer limit <= max_limit. Signal values are multiples of 0.5 so exact
/// zero-lifespan boundaries occur regularly.
inline SmallCase random_small_case(Lcg& rng, std::size_t max_events = 20, std::size_t max_cells = 4,
                                   int max_limit = 20) {
  static constexpr std::array<const char*, 3> kTypes{"a", "b", "c"};
  SmallCase c;
  c.config.num_cells = 1 + rng.below(max_cells);
  c.config.lifespan_limit = static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(max_limit)));
  c.config.flush_at_end = rng.below(2) == 1;
  const std::size_t n_events = rng.below(max_events + 1);
  double t = 0.0;
  for (std::size_t i = 0; i < n_events; ++i) {
    t += 0.5 * static_cast<double>(rng.below(3));
    if (rng.below(2) == 0) {
      c.events.emplace_back(AntigenEvent{t, kTypes[rng.below(kTypes.size())]});
    } else {
      const double danger = 0.5 * static_cast<double>(rng.below(25));
      const double safe = 0.5 * static_cast<double>(rng.below(17));
      c.events.emplace_back(SignalInstance{t, danger, safe});
    }
  }
  return c;
}

struct CampaignResult {
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  std::size_t conservation_failures = 0;
  std::optional<std::size_t> first_mismatch;

  bool passed() const { return mismatches == 0 && conservation_failures == 0; }
};

inline CampaignResult oracle_campaign(std::uint64_t seed, std::size_t cases) {
  Lcg rng(seed);
  CampaignResult result;
  for (std::size_t i = 0; i < cases; ++i) {
    const SmallCase c = random_small_case(rng);
    const RunLog engine_log = run_stream(c.config, c.events);
    const RunLog oracle_log = oracle::oracle_run(c.config, c.events);
    ++result.cases;
    if (!(engine_log == oracle_log)) {
      ++result.mismatches;
      if (!result.first_mismatch) result.first_mismatch = i;
    }
    const bool flushed_clean = !c.config.flush_at_end || engine_log.unpresented_profile.empty();
    if (!engine_log.conserves_antigen() || !oracle_log.conserves_antigen() || !flushed_clean) {
      ++result.conservation_failures;
    }
  }
  return result;
}

}  // namespace ddca
