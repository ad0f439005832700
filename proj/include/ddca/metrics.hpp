#pragma once

// Post-hoc anomaly metrics over a run's presentation records.
//
//   MCAV_a = M / Ag          fraction of type-a antigen presented by cells
//                            with positive context (k > 0)
//   K_a    = sum k / sum n   context of the presenting cells over the count
//                            of type-a antigen they carried
//   T_K    = S_K / I_s * i   with S_K = sum D - 2 sum S over all instances
//
// Scores of types that were never presented are absent, not zero.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddca/engine.hpp"
#include "ddca/errors.hpp"
#include "ddca/events.hpp"

namespace ddca {

enum class KAlphaMode {
  literal,   // sum of k_m over presenting cells / sum of counts
  weighted,  // sum of k_m * count_m / sum of counts
};

enum class Classification { normal, anomalous, unclassified };

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::normal:
      return "normal";
    case Classification::anomalous:
      return "anomalous";
    case Classification::unclassified:
      break;
  }
  return "NA";
}

inline std::string_view to_string(KAlphaMode m) {
  return m == KAlphaMode::literal ? "literal" : "weighted";
}

struct TypeTally {
  std::uint64_t presented = 0;
  std::uint64_t mature = 0;
};

inline TypeTally tally(std::span<const PresentationRecord> records, std::string_view type) {
  TypeTally t;
  for (const auto& r : records) {
    const std::uint64_t n = r.profile.count(type);
    t.presented += n;
    if (r.k_value > 0.0) t.mature += n;
  }
  return t;
}

inline std::optional<double> mcav(std::span<const PresentationRecord> records, std::string_view type) {
  const TypeTally t = tally(records, type);
  if (t.presented == 0) return std::nullopt;
  return static_cast<double>(t.mature) / static_cast<double>(t.presented);
}

inline std::optional<double> k_alpha(std::span<const PresentationRecord> records, std::string_view type,
                                     KAlphaMode mode = KAlphaMode::literal) {
  double numerator = 0.0;
  std::uint64_t denominator = 0;
  for (const auto& r : records) {
    const std::uint64_t n = r.profile.count(type);
    if (n == 0) continue;
    numerator += mode == KAlphaMode::literal ? r.k_value : r.k_value * static_cast<double>(n);
    denominator += n;
  }
  if (denominator == 0) return std::nullopt;
  return numerator / static_cast<double>(denominator);
}

struct KThreshold {
  double s_k = 0.0;
  std::uint64_t i_s = 0;
  double i_bar = 0.0;
  double t_k = 0.0;
};

inline KThreshold t_k_threshold(double s_k, std::uint64_t i_s, double i_bar) {
  if (i_s == 0) throw ConfigError("T_K is undefined without signal instances");
  if (!(i_bar > 0.0)) throw ConfigError("T_K needs a positive mean iteration count");
  return {s_k, i_s, i_bar, s_k / static_cast<double>(i_s) * i_bar};
}

inline KThreshold t_k_threshold(std::span<const SignalInstance> signals, double i_bar) {
  double danger = 0.0;
  double safe = 0.0;
  for (const auto& s : signals) {
    danger += s.danger;
    safe += s.safe;
  }
  return t_k_threshold(danger - 2.0 * safe, signals.size(), i_bar);
}

/// Ratio of total danger to total safe signal.
inline double mcav_threshold(std::span<const SignalInstance> signals) {
  double danger = 0.0;
  double safe = 0.0;
  for (const auto& s : signals) {
    danger += s.danger;
    safe += s.safe;
  }
  if (!(safe > 0.0)) throw ConfigError("MCAV threshold is undefined when the safe signal total is zero");
  return danger / safe;
}

/// Strictly above the threshold is anomalous; equality is normal.
inline Classification classify(std::optional<double> score, std::optional<double> threshold) {
  if (!score || !threshold) return Classification::unclassified;
  return *score > *threshold ? Classification::anomalous : Classification::normal;
}

struct AntigenTypeReport {
  std::string antigen_type;
  std::uint64_t presented_total = 0;
  std::uint64_t mature_count = 0;
  std::optional<double> mcav;
  std::optional<double> k_alpha;
  Classification mcav_class = Classification::unclassified;
  Classification k_class = Classification::unclassified;
};

struct ThresholdSet {
  std::uint64_t i_s = 0;
  std::optional<double> s_k;
  std::optional<double> i_bar;
  std::optional<double> t_k;
  std::optional<double> mcav_threshold;
};

struct AnalysisOptions {
  KAlphaMode mode = KAlphaMode::weighted;
  // Used when the safe total is zero, or to override the derived ratio.
  std::optional<double> mcav_threshold_override;
};

struct Analysis {
  std::vector<AntigenTypeReport> reports;
  ThresholdSet thresholds;
  CellStatistics stats;
};

/// Every antigen type seen by the run, sorted by label.
inline std::vector<std::string> antigen_types(const RunLog& log) {
  std::set<std::string> types;
  for (const auto& r : log.records) {
    for (const auto& [type, n] : r.profile) types.insert(type);
  }
  for (const auto& [type, n] : log.unpresented_profile) types.insert(type);
  return {types.begin(), types.end()};
}

inline ThresholdSet derive_thresholds(std::span<const SignalInstance> signals, const CellStatistics& stats,
                                      const AnalysisOptions& options) {
  ThresholdSet th;
  th.i_s = signals.size();
  th.i_bar = stats.mean_iterations;
  if (!signals.empty()) {
    double danger = 0.0;
    double safe = 0.0;
    for (const auto& s : signals) {
      danger += s.danger;
      safe += s.safe;
    }
    th.s_k = danger - 2.0 * safe;
    if (stats.mean_iterations) th.t_k = t_k_threshold(*th.s_k, th.i_s, *stats.mean_iterations).t_k;
    if (safe > 0.0) th.mcav_threshold = danger / safe;
  }
  if (options.mcav_threshold_override) th.mcav_threshold = options.mcav_threshold_override;
  return th;
}

inline Analysis analyze(const RunLog& log, std::span<const SignalInstance> signals, const EngineConfig& config,
                        const AnalysisOptions& options = {}) {
  Analysis a;
  a.stats = cell_statistics(log, config);
  a.thresholds = derive_thresholds(signals, a.stats, options);
  for (const auto& type : antigen_types(log)) {
    AntigenTypeReport r;
    r.antigen_type = type;
    const TypeTally t = tally(log.records, type);
    r.presented_total = t.presented;
    r.mature_count = t.mature;
    r.mcav = mcav(log.records, type);
    r.k_alpha = k_alpha(log.records, type, options.mode);
    r.mcav_class = classify(r.mcav, a.thresholds.mcav_threshold);
    r.k_class = classify(r.k_alpha, a.thresholds.t_k);
    a.reports.push_back(std::move(r));
  }
  return a;
}

inline const AntigenTypeReport* find_report(const Analysis& a, std::string_view type) {
  for (const auto& r : a.reports) {
    if (r.antigen_type == type) return &r;
  }
  return nullptr;
}

}  // namespace ddca
