// ddca: command-line front end for the deterministic dendritic cell engine.
//
//   ddca gen --seed 1 --spec portscan-default -o session.csv
//   ddca run -i session.csv --cells 100 --limit 100 -o out/
//   ddca sweep-cells -i session.csv --counts 1,5,10,50,100,500,1000,5000 -o sweep/
//   ddca sweep-shift -i session.csv --offsets=-20,-10,0,10,20 -o shift/
//   ddca oracle-check --seed 1 --cases 500
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant violation.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddca/ddca.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

// Collects output files in a staging directory next to the target and moves
// them into place only when commit() is reached.
class StagedOutput {
 public:
  explicit StagedOutput(const std::string& target) {
    static std::atomic<int> counter{0};
    std::string trimmed = target;
    while (trimmed.size() > 1 && trimmed.back() == '/') trimmed.pop_back();
    target_ = trimmed;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const fs::path parent = target_.has_parent_path() ? target_.parent_path() : fs::path(".");
    const std::string name = target_.filename().string();
    staging_ = parent / ("." + name + ".staging-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(staging_);
  }

  ~StagedOutput() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  void write(const std::string& filename, std::string_view text) {
    ddca::write_text_file(staging_ / filename, text);
    files_.push_back(filename);
  }

  void commit() {
    fs::create_directories(target_);
    for (const auto& f : files_) fs::rename(staging_ / f, target_ / f);
  }

 private:
  fs::path target_;
  fs::path staging_;
  std::vector<std::string> files_;
};

// Writes a single file atomically via a temporary sibling.
void write_file_atomic(const fs::path& path, std::string_view text) {
  fs::path tmp = path;
  tmp += ".tmp";
  try {
    ddca::write_text_file(tmp, text);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

ddca::ProcessRole parse_role(const std::string& s) {
  if (s == "normal") return ddca::ProcessRole::normal;
  if (s == "anomalous") return ddca::ProcessRole::anomalous;
  throw ddca::ConfigError("unknown process role '" + s + "'");
}

ddca::ScenarioSpec load_scenario(const std::string& spec_arg, std::uint64_t seed) {
  if (spec_arg == "portscan-default") return ddca::portscan_default(seed);
  if (!fs::exists(spec_arg)) throw ddca::ConfigError("unknown scenario '" + spec_arg + "'");

  ddca::ScenarioSpec spec;
  try {
    const auto j = nlohmann::json::parse(ddca::read_text_file(spec_arg));
    spec.duration = j.value("duration", spec.duration);
    spec.signal_period = j.value("signal_period", spec.signal_period);
    spec.normalization_max = j.value("normalization_max", spec.normalization_max);
    spec.noise = j.value("noise", spec.noise);
    const auto window = j.at("scan_window").get<std::vector<double>>();
    if (window.size() != 2) throw ddca::ConfigError("scan_window must be [start, end]");
    spec.scan_start = window[0];
    spec.scan_end = window[1];
    spec.baseline = {j.at("baseline").at("danger").get<double>(), j.at("baseline").at("safe").get<double>()};
    spec.scan = {j.at("scan").at("danger").get<double>(), j.at("scan").at("safe").get<double>()};
    for (const auto& p : j.at("processes")) {
      const auto active = p.at("active").get<std::vector<double>>();
      if (active.size() != 2) throw ddca::ConfigError("process active window must be [start, end]");
      spec.processes.push_back({p.at("label").get<std::string>(), p.at("rate").get<double>(), active[0], active[1],
                                parse_role(p.at("role").get<std::string>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ddca::ConfigError("invalid scenario file '" + spec_arg + "': " + e.what());
  }
  spec.seed = seed;
  return spec;
}

struct EngineFlags {
  std::size_t cells = 100;
  double limit = 100.0;
  bool flush = false;
  std::string mode = "weighted";
  std::optional<double> mcav_threshold;

  void attach(CLI::App* cmd, bool with_cells = true) {
    if (with_cells) cmd->add_option("--cells", cells, "Number of dendritic cells")->capture_default_str();
    cmd->add_option("--limit", limit, "Lifespan limit in csm units")->capture_default_str();
    cmd->add_flag("--flush", flush, "Present live cells holding antigen at end of stream");
    cmd->add_option("--mode", mode, "K_alpha numerator: weighted (count-weighted k) or literal (plain sum of k)")
        ->check(CLI::IsMember({"literal", "weighted"}))
        ->capture_default_str();
    cmd->add_option("--mcav-threshold", mcav_threshold, "Override the danger/safe ratio threshold");
  }

  ddca::EngineConfig config() const { return {cells, limit, flush}; }

  ddca::AnalysisOptions analysis() const {
    return {mode == "weighted" ? ddca::KAlphaMode::weighted : ddca::KAlphaMode::literal, mcav_threshold};
  }
};

ddca::EventStream load_stream(const std::string& path) {
  ddca::ParseReport report = ddca::read_stream_file(path);
  if (report.clamp_warnings > 0) {
    std::cerr << "warning: " << report.clamp_warnings << " signal value(s) clamped to [0, "
              << ddca::format_decimal(report.stream.metadata.normalization_max) << "]\n";
  }
  return std::move(report.stream);
}

std::string row_suffix(const ddca::SweepResult& sweep, const ddca::SweepRow& row) {
  if (sweep.parameter == "num_cells") return "n" + std::to_string(static_cast<std::size_t>(row.swept_value));
  return "offset" + ddca::format_decimal(row.swept_value);
}

int emit_sweep(const ddca::SweepResult& sweep, const std::string& out_dir) {
  int status = 0;
  for (const auto& row : sweep.rows) {
    if (!row.outcome) {
      std::cerr << "error: " << sweep.parameter << "=" << ddca::format_decimal(row.swept_value) << ": " << row.error
                << "\n";
      status = kExitData;
    }
  }
  const std::string summary = ddca::write_sweep_summary(sweep);
  if (out_dir.empty()) {
    std::cout << summary;
    return status;
  }
  StagedOutput out(out_dir);
  for (const auto& row : sweep.rows) {
    if (!row.outcome) continue;
    const std::string suffix = row_suffix(sweep, row);
    out.write("results_" + suffix + ".csv", ddca::write_results(row.outcome->analysis));
    out.write("run_stats_" + suffix + ".csv",
              ddca::write_run_stats(row.outcome->config, row.outcome->analysis, row.outcome->wall_time_ms));
  }
  out.write("summary.csv", summary);
  out.commit();
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic dendritic cell algorithm engine"};
  app.require_subcommand(1);

  // gen
  std::uint64_t gen_seed = 1;
  std::string gen_spec = "portscan-default";
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic event stream");
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--spec", gen_spec, "Scenario name (portscan-default) or JSON file")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Output stream file ('-' for stdout)")->required();

  // run
  std::string run_in;
  std::string run_out;
  EngineFlags run_flags;
  auto* run = app.add_subcommand("run", "Run the engine and compute per-type metrics");
  run->add_option("-i,--input", run_in, "Input stream file")->required();
  run->add_option("-o,--output", run_out, "Output directory")->required();
  run_flags.attach(run);

  // sweep-cells
  std::string sc_in;
  std::string sc_out;
  std::vector<std::size_t> sc_counts(ddca::kDefaultCellCounts.begin(), ddca::kDefaultCellCounts.end());
  bool sc_parallel = false;
  EngineFlags sc_flags;
  auto* sweep_cells = app.add_subcommand("sweep-cells", "Sweep the number of cells");
  sweep_cells->add_option("-i,--input", sc_in, "Input stream file")->required();
  sweep_cells->add_option("-o,--output", sc_out, "Output directory (summary to stdout if omitted)");
  sweep_cells->add_option("--counts", sc_counts, "Cell counts")->delimiter(',')->check(CLI::PositiveNumber);
  sweep_cells->add_flag("--parallel", sc_parallel, "Run rows concurrently");
  sc_flags.attach(sweep_cells, false);

  // sweep-shift
  std::string ss_in;
  std::string ss_out;
  std::vector<double> ss_offsets = ddca::default_shift_offsets();
  bool ss_parallel = false;
  EngineFlags ss_flags;
  auto* sweep_shift = app.add_subcommand("sweep-shift", "Sweep signal time shifts");
  sweep_shift->add_option("-i,--input", ss_in, "Input stream file")->required();
  sweep_shift->add_option("-o,--output", ss_out, "Output directory (summary to stdout if omitted)");
  sweep_shift->add_option("--offsets", ss_offsets, "Signal offsets in seconds (use --offsets=-20,-18,...)")
      ->delimiter(',');
  sweep_shift->add_flag("--parallel", ss_parallel, "Run rows concurrently");
  ss_flags.attach(sweep_shift);

  // oracle-check
  std::uint64_t oc_seed = 1;
  std::size_t oc_cases = 500;
  std::string oc_in;
  EngineFlags oc_flags;
  auto* oracle_check = app.add_subcommand("oracle-check", "Compare the engine against the reference oracle");
  oracle_check->add_option("--seed", oc_seed, "Campaign seed")->capture_default_str();
  oracle_check->add_option("--cases", oc_cases, "Number of random small streams")->capture_default_str();
  oracle_check->add_option("-i,--input", oc_in, "Check a specific stream file instead of random cases");
  oc_flags.attach(oracle_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const auto spec = load_scenario(gen_spec, gen_seed);
      const std::string text = ddca::write_stream(ddca::generate_scenario(spec));
      if (gen_out == "-") {
        std::cout << text;
      } else {
        write_file_atomic(gen_out, text);
      }
      return 0;
    }

    if (*run) {
      const auto config = run_flags.config();
      config.validate();
      const auto stream = load_stream(run_in);
      const auto outcome = ddca::run_pipeline(stream, config, run_flags.analysis());
      StagedOutput out(run_out);
      out.write("results.csv", ddca::write_results(outcome.analysis));
      out.write("run_stats.csv", ddca::write_run_stats(config, outcome.analysis, outcome.wall_time_ms));
      out.commit();
      return 0;
    }

    if (*sweep_cells) {
      auto base = sc_flags.config();
      base.validate();
      const auto stream = load_stream(sc_in);
      return emit_sweep(ddca::sweep_cell_numbers(stream, sc_counts, base, {sc_flags.analysis(), sc_parallel}), sc_out);
    }

    if (*sweep_shift) {
      const auto config = ss_flags.config();
      config.validate();
      const auto stream = load_stream(ss_in);
      return emit_sweep(ddca::sweep_time_shifts(stream, ss_offsets, config, {ss_flags.analysis(), ss_parallel}),
                        ss_out);
    }

    if (*oracle_check) {
      if (!oc_in.empty()) {
        const auto config = oc_flags.config();
        config.validate();
        const auto stream = load_stream(oc_in);
        const auto engine_log = ddca::run_stream(config, stream.events);
        const auto oracle_log = ddca::oracle::oracle_run(config, stream.events);
        if (!(engine_log == oracle_log)) {
          std::cerr << "oracle mismatch on " << oc_in << "\n";
          return kExitInvariant;
        }
        std::cout << "oracle-check: " << oc_in << " matches (" << engine_log.records.size() << " presentations)\n";
        return 0;
      }
      const auto result = ddca::oracle_campaign(oc_seed, oc_cases);
      std::cout << "oracle-check: " << result.cases << " cases, " << result.mismatches << " mismatches, "
                << result.conservation_failures << " conservation failures\n";
      return result.passed() ? 0 : kExitInvariant;
    }
  } catch (const ddca::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ddca::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ddca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
