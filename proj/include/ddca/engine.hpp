#pragma once

// Deterministic dendritic cell engine.
//
// A fixed population of N cells is created with lifespans spread uniformly
// over (0, lifespan_limit]. Antigens are handed out round-robin. Each signal
// instance is reduced once to (csm, k) and applied to every cell: the cell's
// lifespan drops by csm and its context accumulates k. A cell whose lifespan
// reaches zero or below presents (its k, antigen counts and iteration count
// are logged) and is reset to its initial state.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddca/errors.hpp"
#include "ddca/events.hpp"

namespace ddca {

struct EngineConfig {
  std::size_t num_cells = 100;
  double lifespan_limit = 100.0;
  bool flush_at_end = false;

  void validate() const {
    if (num_cells == 0) throw ConfigError("num_cells must be at least 1");
    if (!(lifespan_limit > 0.0) || lifespan_limit == std::numeric_limits<double>::infinity()) {
      throw ConfigError("lifespan_limit must be a positive finite number");
    }
  }
};

struct ProcessedSignal {
  double csm = 0.0;
  double k = 0.0;

  friend bool operator==(const ProcessedSignal&, const ProcessedSignal&) = default;
};

/// Costimulation csm = S + D and context k = D - 2S.
constexpr ProcessedSignal process_signal(const SignalInstance& s) {
  return {s.safe + s.danger, s.danger - 2.0 * s.safe};
}

struct DendriticCell {
  std::size_t index = 0;
  double initial_lifespan = 0.0;
  double lifespan = 0.0;
  double k_sum = 0.0;
  AntigenProfile profile;
  std::uint64_t iterations = 0;
  std::uint64_t incarnations = 0;

  void reset() {
    lifespan = initial_lifespan;
    k_sum = 0.0;
    profile.clear();
    iterations = 0;
  }
};

struct PresentationRecord {
  std::size_t cell_index = 0;
  double k_value = 0.0;
  AntigenProfile profile;
  std::uint64_t iterations = 0;
  Seconds presented_at = 0.0;

  friend bool operator==(const PresentationRecord&, const PresentationRecord&) = default;
};

struct RunLog {
  std::vector<PresentationRecord> records;
  std::uint64_t antigen_counter = 0;
  std::uint64_t signal_counter = 0;
  // Lifespan-triggered resets only; end-of-stream flushes are not counted.
  std::uint64_t total_incarnations = 0;
  AntigenProfile unpresented_profile;

  std::uint64_t presented_antigen_total() const {
    std::uint64_t sum = 0;
    for (const auto& r : records) sum += r.profile.total();
    return sum;
  }

  bool conserves_antigen() const {
    return presented_antigen_total() + unpresented_profile.total() == antigen_counter;
  }

  friend bool operator==(const RunLog&, const RunLog&) = default;
};

/// Cell i gets lifespan limit * (i + 1) / N, so the range is (0, limit].
inline std::vector<DendriticCell> init_population(const EngineConfig& config) {
  config.validate();
  std::vector<DendriticCell> cells(config.num_cells);
  const auto n = static_cast<double>(config.num_cells);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].index = i;
    cells[i].initial_lifespan = config.lifespan_limit * static_cast<double>(i + 1) / n;
    cells[i].reset();
  }
  return cells;
}

class Engine {
 public:
  explicit Engine(EngineConfig config) : config_(config), cells_(init_population(config_)) {}

  const EngineConfig& config() const { return config_; }
  std::span<const DendriticCell> cells() const { return cells_; }
  const RunLog& log() const { return log_; }

  void ingest(const Event& event) {
    std::visit([this](const auto& e) { ingest_one(e); }, event);
  }

  // The counter is incremented first, so the first antigen lands in cell 1 % N.
  void ingest_antigen(const AntigenEvent& event) {
    if (event.antigen_type.empty()) throw DataError("antigen event with empty type");
    advance_clock(event.time);
    ++log_.antigen_counter;
    if (++next_cell_ == cells_.size()) next_cell_ = 0;
    cells_[next_cell_].profile.add(event.antigen_type);
  }

  void ingest_signal(const SignalInstance& instance) {
    advance_clock(instance.time);
    const ProcessedSignal ps = process_signal(instance);
    for (auto& cell : cells_) {
      cell.lifespan -= ps.csm;
      cell.k_sum += ps.k;
      ++cell.iterations;
      if (cell.lifespan <= 0.0) {
        present(cell, instance.time);
        ++cell.incarnations;
        ++log_.total_incarnations;
        cell.reset();
      }
    }
    ++log_.signal_counter;
  }

  /// Ends the stream: optionally flushes live cells that hold antigen, then
  /// collects whatever antigen is still held into unpresented_profile.
  RunLog finish() {
    if (finished_) throw InvariantError("engine already finished");
    finished_ = true;
    const Seconds end_time = last_time_.value_or(0.0);
    for (auto& cell : cells_) {
      if (config_.flush_at_end && !cell.profile.empty()) {
        present(cell, end_time);
        cell.reset();
      }
      log_.unpresented_profile.merge(cell.profile);
    }
    if (!log_.conserves_antigen()) throw InvariantError("antigen conservation violated");
    return std::move(log_);
  }

 private:
  void ingest_one(const AntigenEvent& e) { ingest_antigen(e); }
  void ingest_one(const SignalInstance& s) { ingest_signal(s); }

  void advance_clock(Seconds t) {
    if (finished_) throw InvariantError("engine already finished");
    if (last_time_ && t < *last_time_) {
      throw DataError("event stream is not sorted: time " + std::to_string(t) + " after " +
                      std::to_string(*last_time_));
    }
    last_time_ = t;
  }

  // Moves the profile out; the caller resets the cell.
  void present(DendriticCell& cell, Seconds at) {
    log_.records.push_back({cell.index, cell.k_sum, std::move(cell.profile), cell.iterations, at});
  }

  EngineConfig config_;
  std::vector<DendriticCell> cells_;
  RunLog log_;
  std::optional<Seconds> last_time_;
  std::size_t next_cell_ = 0;  // antigen_counter % N, kept incrementally
  bool finished_ = false;
};

inline RunLog run_stream(const EngineConfig& config, std::span<const Event> events) {
  Engine engine(config);
  for (const auto& e : events) engine.ingest(e);
  return engine.finish();
}

struct CellStatistics {
  std::optional<double> mean_iterations;
  std::optional<double> mean_incarnations;
};

/// Mean iterations per presentation and presentations per cell. Both are
/// absent when nothing was presented.
inline CellStatistics cell_statistics(const RunLog& log, const EngineConfig& config) {
  if (log.records.empty()) return {};
  std::uint64_t iterations = 0;
  for (const auto& r : log.records) iterations += r.iterations;
  const auto count = static_cast<double>(log.records.size());
  return {static_cast<double>(iterations) / count, count / static_cast<double>(config.num_cells)};
}

}  // namespace ddca
