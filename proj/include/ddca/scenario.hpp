#pragma once

// Seeded synthetic port-scan sessions and the signal time-shift transform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ddca/errors.hpp"
#include "ddca/events.hpp"
#include "ddca/lcg.hpp"
#include "ddca/stream_io.hpp"

namespace ddca {

enum class ProcessRole { normal, anomalous };

struct ProcessSpec {
  std::string label;
  double rate = 0.0;  // antigens per second while active
  Seconds active_start = 0.0;
  Seconds active_end = 0.0;
  ProcessRole role = ProcessRole::normal;
};

struct SignalLevels {
  double danger = 0.0;
  double safe = 0.0;
};

struct ScenarioSpec {
  Seconds duration = 38.0;
  Seconds signal_period = 1.0;
  std::vector<ProcessSpec> processes;
  Seconds scan_start = 0.0;
  Seconds scan_end = 0.0;
  std::uint64_t seed = 1;
  double normalization_max = kDefaultNormalizationMax;
  SignalLevels baseline;  // outside the scan window: safe dominates
  SignalLevels scan;      // inside the scan window: danger dominates
  double noise = 0.0;     // uniform jitter half-width added to each level

  void validate() const {
    if (!(duration > 0.0)) throw ConfigError("scenario duration must be positive");
    if (!(signal_period > 0.0)) throw ConfigError("signal period must be positive");
    if (!(normalization_max > 0.0)) throw ConfigError("normalization max must be positive");
    if (processes.empty()) throw ConfigError("scenario needs at least one process");
    bool has_normal = false;
    bool has_anomalous = false;
    for (const auto& p : processes) {
      if (!valid_antigen_label(p.label)) throw ConfigError("invalid process label '" + p.label + "'");
      if (!(p.rate >= 0.0) || !std::isfinite(p.rate)) throw ConfigError("process rate must be finite and >= 0");
      if (p.active_start < 0.0 || p.active_end < p.active_start || p.active_end > duration) {
        throw ConfigError("process '" + p.label + "' active window must lie within [0, duration]");
      }
      (p.role == ProcessRole::normal ? has_normal : has_anomalous) = true;
    }
    if (!has_normal || !has_anomalous) throw ConfigError("scenario needs a normal and an anomalous process");
    if (scan_start < 0.0 || scan_end < scan_start || scan_end > duration) {
      throw ConfigError("scan window must lie within [0, duration]");
    }
    if (!(noise >= 0.0)) throw ConfigError("noise must be >= 0");
  }

  std::size_t signal_count() const {
    return static_cast<std::size_t>(std::floor(duration / signal_period + 1e-9));
  }
};

/// A 38 s remote-shell session with an outbound scan in [12, 24]: nmap and
/// its parent pts are active only during the scan, bash and sshd throughout.
/// About 100k antigens in total, dense enough that round-robin assignment
/// wraps a 5000-cell population many times.
inline ScenarioSpec portscan_default(std::uint64_t seed = 1) {
  ScenarioSpec spec;
  spec.duration = 38.0;
  spec.signal_period = 1.0;
  spec.scan_start = 12.0;
  spec.scan_end = 24.0;
  spec.seed = seed;
  spec.baseline = {4.4, 30.0};
  spec.scan = {38.0, 4.0};
  spec.noise = 3.0;
  spec.processes = {
      {"nmap", 1500.0, 12.0, 24.0, ProcessRole::anomalous},
      {"pts", 500.0, 12.0, 24.0, ProcessRole::anomalous},
      {"bash", 1500.0, 0.0, 38.0, ProcessRole::normal},
      {"sshd", 500.0, 0.0, 38.0, ProcessRole::normal},
  };
  return spec;
}

namespace detail {

// Rounds to a multiple of 1/per_unit, e.g. per_unit = 10 gives one decimal.
inline double quantize(double v, double per_unit) { return std::round(v * per_unit) / per_unit; }

}  // namespace detail

/// Draw order: per signal instance (danger jitter, safe jitter), then each
/// process's exponential inter-arrival gaps in listing order. Signal values
/// are rounded to 0.1 and antigen times to 1 ms.
inline EventStream generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Lcg rng(spec.seed);
  EventStream stream;
  stream.metadata.source = "synthetic";
  stream.metadata.seed = spec.seed;
  stream.metadata.normalization_max = spec.normalization_max;

  const auto jitter = [&](double level) {
    const double v = level + rng.uniform(-spec.noise, spec.noise);
    return detail::quantize(std::clamp(v, 0.0, spec.normalization_max), 10.0);
  };

  const std::size_t n_signals = spec.signal_count();
  for (std::size_t i = 1; i <= n_signals; ++i) {
    const Seconds t = static_cast<double>(i) * spec.signal_period;
    const Seconds mid = t - spec.signal_period / 2.0;
    const bool scanning = mid >= spec.scan_start && mid <= spec.scan_end;
    const SignalLevels& lv = scanning ? spec.scan : spec.baseline;
    const double danger = jitter(lv.danger);
    const double safe = jitter(lv.safe);
    stream.events.emplace_back(SignalInstance{t, danger, safe});
  }

  for (const auto& p : spec.processes) {
    if (p.rate <= 0.0) continue;
    Seconds t = p.active_start;
    while (true) {
      t += rng.exponential(p.rate);
      if (t >= p.active_end) break;
      stream.events.emplace_back(AntigenEvent{detail::quantize(t, 1000.0), p.label});
    }
  }

  std::stable_sort(stream.events.begin(), stream.events.end(), event_before);
  return stream;
}

struct ShiftResult {
  EventStream stream;
  std::size_t dropped = 0;
};

/// Moves every signal by offset seconds (positive delays, negative advances).
/// Antigens stay put; signals landing before t = 0 are dropped.
inline ShiftResult shift_signals(const EventStream& stream, Seconds offset) {
  ShiftResult result;
  result.stream.metadata = stream.metadata;
  result.stream.events.reserve(stream.events.size());
  for (const auto& e : stream.events) {
    if (const auto* s = std::get_if<SignalInstance>(&e)) {
      SignalInstance moved = *s;
      moved.time += offset;
      if (moved.time < 0.0) {
        ++result.dropped;
        continue;
      }
      result.stream.events.emplace_back(moved);
    } else {
      result.stream.events.push_back(e);
    }
  }
  std::stable_sort(result.stream.events.begin(), result.stream.events.end(), event_before);
  return result;
}

}  // namespace ddca
