#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wban/batch.hpp"
#include "wban/scenario.hpp"

namespace wban::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out_dir = "out";
  bool trace = false;
  bool validate_only = false;
};

std::string seed_label(std::span<const std::uint64_t> seeds) {
  if (seeds.size() == 1) return std::to_string(seeds.front());
  return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
}

// Opens for writing or throws with the offending path.
std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_outputs(const Options& opt, const Scenario& sc, std::span<const std::uint64_t> seeds,
                   std::span<const RunResult> runs, std::ostream& out) {
  const fs::path dir = opt.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());

  const std::string mac{to_string(sc.mac)};
  auto summary = open_out(dir / "summary.csv");
  bool header = true;
  for (const RunResult& r : runs) {
    MetricsLedger ledger = r.ledger;
    ledger.normalize();
    const RunLabel label{"seed" + std::to_string(r.seed), std::to_string(r.seed), mac};
    auto f = open_out(dir / ("run_seed" + std::to_string(r.seed) + ".csv"));
    write_node_csv(f, label, ledger, sc.energy);
    write_summary_csv(summary, label, ledger, header);
    header = false;
    if (opt.trace) {
      auto t = open_out(dir / ("trace_seed" + std::to_string(r.seed) + ".txt"));
      for (const auto& line : r.trace) t << line << '\n';
    }
  }
  if (runs.size() > 1) {
    const MetricsLedger total = aggregate(runs);
    const RunLabel label{"aggregate", seed_label(seeds), mac};
    auto f = open_out(dir / "aggregate.csv");
    write_node_csv(f, label, total, sc.energy);
    write_summary_csv(summary, label, total, false);
  }
  out << "wrote " << runs.size() << " run(s) to " << dir.string() << '\n';
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Discrete-event simulator for body-area network MAC and wakeup schemes"};
  app.add_option("--scenario", opt.scenario, "Scenario file (YAML)")->required();
  auto* seed = app.add_option("--seed", opt.seed, "Run a single seed");
  app.add_option("--seeds", opt.seeds, "Seed range A..B")->excludes(seed);
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--trace", opt.trace, "Also write one event-trace file per run");
  app.add_flag("--validate-only", opt.validate_only, "Check the scenario and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kValidationFailed;
  }

  Scenario sc;
  try {
    sc = load_scenario(opt.scenario);
  } catch (const ScenarioError& e) {
    err << e.what();
    return kValidationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailed;
  }

  std::vector<std::uint64_t> seeds = sc.seeds;
  if (opt.seed) seeds = {*opt.seed};
  if (!opt.seeds.empty()) {
    auto parsed = parse_seed_range(opt.seeds);
    if (!parsed) {
      err << "error: --seeds expects N or A..B, got '" << opt.seeds << "'\n";
      return kValidationFailed;
    }
    seeds = *parsed;
  }

  if (opt.validate_only) {
    out << opt.scenario << ": ok\n";
    return kOk;
  }

  try {
    RunOptions ro;
    ro.trace = opt.trace;
    const auto runs = seeds.size() > 1 ? run_sweep_parallel(sc, seeds, ro) : run_sweep_serial(sc, seeds, ro);
    write_outputs(opt, sc, seeds, runs, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

}  // namespace wban::cli
