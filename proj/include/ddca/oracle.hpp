#pragma once

// Reference implementation of the dendritic cell loop, written as a literal
// transcription with parallel arrays. It shares only the data types with
// Engine and is meant for small instances where obviousness beats speed.

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ddca/engine.hpp"
#include "ddca/errors.hpp"
#include "ddca/events.hpp"

namespace ddca::oracle {

inline RunLog oracle_run(const EngineConfig& config, std::span<const Event> events) {
  if (config.num_cells < 1) throw ConfigError("num_cells must be at least 1");
  if (!(config.lifespan_limit > 0.0)) throw ConfigError("lifespan_limit must be positive");

  const std::size_t number_of_cells = config.num_cells;
  std::vector<double> start_lifespan(number_of_cells);
  std::vector<double> lifespan(number_of_cells);
  std::vector<double> k(number_of_cells);
  std::vector<std::uint64_t> iterations(number_of_cells);
  std::vector<std::map<std::string, std::uint64_t>> antigen(number_of_cells);
  for (std::size_t i = 0; i < number_of_cells; i++) {
    start_lifespan[i] = config.lifespan_limit * static_cast<double>(i + 1) / static_cast<double>(number_of_cells);
    lifespan[i] = start_lifespan[i];
    k[i] = 0.0;
    iterations[i] = 0;
  }

  RunLog log;
  std::uint64_t antigen_counter = 0;
  double previous_time = 0.0;
  bool first = true;

  const auto to_profile = [](const std::map<std::string, std::uint64_t>& m) {
    AntigenProfile p;
    for (const auto& [type, count] : m) p.add(type, count);
    return p;
  };

  for (const Event& input : events) {
    const double time = std::holds_alternative<AntigenEvent>(input) ? std::get<AntigenEvent>(input).time
                                                                     : std::get<SignalInstance>(input).time;
    if (!first && time < previous_time) throw DataError("event stream is not sorted");
    first = false;
    previous_time = time;

    if (std::holds_alternative<AntigenEvent>(input)) {
      const AntigenEvent& a = std::get<AntigenEvent>(input);
      if (a.antigen_type.empty()) throw DataError("antigen event with empty type");
      antigen_counter++;
      const std::size_t cell_index = antigen_counter % number_of_cells;
      antigen[cell_index][a.antigen_type] += 1;
    } else {
      const SignalInstance& s = std::get<SignalInstance>(input);
      const double csm = s.safe + s.danger;
      const double context = s.danger - 2.0 * s.safe;
      for (std::size_t i = 0; i < number_of_cells; i++) {
        lifespan[i] -= csm;
        k[i] += context;
        iterations[i] += 1;
        if (lifespan[i] <= 0.0) {
          log.records.push_back(PresentationRecord{i, k[i], to_profile(antigen[i]), iterations[i], time});
          log.total_incarnations++;
          lifespan[i] = start_lifespan[i];
          k[i] = 0.0;
          iterations[i] = 0;
          antigen[i].clear();
        }
      }
      log.signal_counter++;
    }
  }

  for (std::size_t i = 0; i < number_of_cells; i++) {
    if (config.flush_at_end && !antigen[i].empty()) {
      log.records.push_back(PresentationRecord{i, k[i], to_profile(antigen[i]), iterations[i], previous_time});
      antigen[i].clear();
    }
    for (const auto& [type, count] : antigen[i]) log.unpresented_profile.add(type, count);
  }
  log.antigen_counter = antigen_counter;
  return log;
}

}  // namespace ddca::oracle
