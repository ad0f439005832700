#pragma once

// Results, run-stats and sweep summary tables (CSV, NA for absent values).

#include <optional>
#include <string>

#include "ddca/engine.hpp"
#include "ddca/metrics.hpp"
#include "ddca/stream_io.hpp"

namespace ddca {

inline constexpr std::string_view kResultsHeader = "antigen_type,presented,mature,mcav,k_alpha,mcav_class,k_class";
inline constexpr std::string_view kRunStatsHeader =
    "num_cells,lifespan_limit,i_s,i_bar,mean_incarnations,t_k,mcav_threshold,wall_time_ms";

inline std::string format_optional(const std::optional<double>& v) { return v ? format_decimal(*v) : "NA"; }

inline std::string write_results(const Analysis& analysis) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : analysis.reports) {
    out += r.antigen_type;
    out += ',' + std::to_string(r.presented_total);
    out += ',' + std::to_string(r.mature_count);
    out += ',' + format_optional(r.mcav);
    out += ',' + format_optional(r.k_alpha);
    out += ',';
    out += to_string(r.mcav_class);
    out += ',';
    out += to_string(r.k_class);
    out += '\n';
  }
  return out;
}

inline std::string write_run_stats(const EngineConfig& config, const Analysis& analysis, double wall_time_ms) {
  std::string out(kRunStatsHeader);
  out += '\n';
  out += std::to_string(config.num_cells);
  out += ',' + format_decimal(config.lifespan_limit);
  out += ',' + std::to_string(analysis.thresholds.i_s);
  out += ',' + format_optional(analysis.thresholds.i_bar);
  out += ',' + format_optional(analysis.stats.mean_incarnations);
  out += ',' + format_optional(analysis.thresholds.t_k);
  out += ',' + format_optional(analysis.thresholds.mcav_threshold);
  out += ',' + format_decimal(wall_time_ms);
  out += '\n';
  return out;
}

}  // namespace ddca
