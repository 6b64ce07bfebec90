#include "opd/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "opd/analysis.hpp"
#include "opd/config.hpp"
#include "opd/io.hpp"
#include "opd/sweep.hpp"

namespace opd {

namespace fs = std::filesystem;

namespace {

struct ScenarioPreset {
  const char* name;
  const char* description;
  double A;
  double b;
  InitKind kind;
  InitialFractions fractions;
  std::vector<std::size_t> snapshots;
};

const std::vector<ScenarioPreset>& presets() {
  static const std::vector<ScenarioPreset> list = {
      {"fig3", "time evolution in the coexistence regime", 0.8, 1.9, InitKind::RandomFractions,
       {}, {}},
      {"fig4", "time evolution in the suppression regime", 1.6, 1.6, InitKind::RandomFractions,
       {}, {}},
      {"fig5", "snapshots in the suppression regime", 1.6, 1.6, InitKind::RandomFractions,
       {}, {0, 10, 100, 1000, 2000}},
      {"fig6", "too few loners: loners die out", 1.6, 1.6, InitKind::RandomFractions,
       {0.9, 0.09, 0.01}, {0, 10, 50, 100, 150, 200}},
      {"fig7", "cooperators surrounded by defectors die out", 1.6, 1.6, InitKind::RandomFractions,
       {0.09, 0.9, 0.01}, {0, 5, 100}},
      {"fig8", "cooperators and loners separated by defectors", 2.4, 1.6, InitKind::SeparatedBands,
       {0.1, 0.8, 0.1}, {0, 10, 30, 50, 100}},
      {"fig9", "cooperators and loners mixed in five clusters", 2.4, 1.6, InitKind::MixedClusters,
       {0.1, 0.8, 0.1}, {0, 10, 100, 500, 1000, 10000}},
  };
  return list;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("OPD_OUT_DIR"); env && *env) return env;
  return ".";
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_key_values(text.str(), path);
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

// Options shared by run, sweep, scan and scenario. Unset options leave the
// config file (or the defaults) untouched.
struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> size;
  std::optional<std::size_t> window;
  std::optional<std::string> protocol;
  std::string out_dir;
  std::string prefix;

  void add_to(CLI::App& app, bool with_config = true) {
    if (with_config) app.add_option("-c,--config", config, "Configuration file (key = value)");
    app.add_option("--seed", seed, "Random seed (overrides config)");
    app.add_option("--steps", steps, "Number of synchronous steps (overrides config)");
    app.add_option("--size", size, "Lattice side length L (overrides config)");
    app.add_option("--window", window, "Trailing averaging window");
    app.add_option("--protocol", protocol, "desk (default step counts) or paper (100000 steps)");
    app.add_option("--out-dir", out_dir, "Output directory (default: $OPD_OUT_DIR or .)");
  }

  void apply(KeyValues& kv) const {
    if (seed) kv["seed"] = std::to_string(*seed);
    if (size) kv["size"] = std::to_string(*size);
    if (protocol) kv["protocol"] = *protocol;
    if (steps) {
      kv["steps"] = std::to_string(*steps);
      if (!window && kv.count("window") && std::stoull(kv.at("window")) > *steps) {
        kv["window"] = std::to_string(*steps);
      }
    }
    if (window) kv["window"] = std::to_string(*window);
  }

  fs::path out() const { return out_dir.empty() ? default_out_dir() : fs::path(out_dir); }
};

struct InitOptions {
  std::optional<std::string> kind;
  std::optional<double> rc0, rd0, rl0;
  std::optional<std::size_t> clusters;
  std::optional<std::string> grid;

  void add_to(CLI::App& app) {
    app.add_option("--init", kind, "random | bands | clusters | explicit");
    app.add_option("--rc0", rc0, "Initial cooperator fraction");
    app.add_option("--rd0", rd0, "Initial defector fraction");
    app.add_option("--rl0", rl0, "Initial loner fraction");
    app.add_option("--clusters", clusters, "Patch count for --init clusters");
    app.add_option("--grid", grid, "Strategy snapshot file for --init explicit");
  }

  void apply(KeyValues& kv) const {
    if (kind) kv["init.kind"] = *kind;
    if (rc0) kv["init.rc0"] = format_double(*rc0);
    if (rd0) kv["init.rd0"] = format_double(*rd0);
    if (rl0) kv["init.rl0"] = format_double(*rl0);
    if (clusters) kv["init.clusters"] = std::to_string(*clusters);
    if (grid) kv["init.grid"] = *grid;
  }
};

void write_run_outputs(const RunConfig& config, const RunResult& result, const fs::path& dir,
                       const std::string& prefix, std::ostream& out) {
  const Provenance prov = describe(config);
  const fs::path ts = dir / (prefix + "_timeseries.csv");
  write_timeseries_csv(result.series, ts, prov);
  out << "wrote " << ts.string() << '\n';
  for (const Snapshot& snap : result.snapshots) {
    const SnapshotPaths paths = snapshot_paths(dir, prefix, snap.step);
    write_snapshot(snap, snapshot_meta(config, snap.step), paths, prov);
    out << "wrote " << paths.strategies.string() << " and " << paths.aspirations.filename().string()
        << '\n';
  }
  const Fractions s = result.series.stable_means();
  out << "stable r_C=" << fmt6(s.cooperators) << " r_D=" << fmt6(s.defectors)
      << " r_L=" << fmt6(s.loners) << " outcome=" << to_string(classify_outcome(result.series))
      << '\n';
}

int run_command(const RunConfig& config, const fs::path& dir, const std::string& prefix,
                std::ostream& out) {
  const RunResult result = run(config);
  write_run_outputs(config, result, dir, prefix, out);
  return 0;
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.emplace_back(p.name);
  return names;
}

RunConfig scenario_config(const std::string& name, std::uint64_t seed) {
  for (const auto& p : presets()) {
    if (name != p.name) continue;
    RunConfig rc;
    rc.params = GameParams::boundary(p.b);
    rc.initial_aspiration = p.A;
    rc.init.kind = p.kind;
    rc.init.fractions = p.fractions;
    rc.init.cluster_count = 5;
    rc.steps = desk_scale_steps(p.A);
    rc.measure_window = kDefaultWindow;
    rc.seed = seed;
    rc.snapshot_steps = p.snapshots;
    rc.validate();
    return rc;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optional Prisoner's Dilemma on a periodic lattice with dynamic aspirations"};
  app.name("opd");
  app.require_subcommand(1);

  // run
  CLI::App* run_cmd = app.add_subcommand("run", "Single simulation: time-series CSV and snapshots");
  CommonOptions run_common;
  InitOptions run_init;
  std::optional<double> run_b, run_A, run_a, run_K, run_l;
  std::optional<std::string> run_snapshots;
  std::string run_prefix = "run";
  run_common.add_to(*run_cmd);
  run_init.add_to(*run_cmd);
  run_cmd->add_option("--b", run_b, "Temptation b");
  run_cmd->add_option("--A", run_A, "Initial aspiration A");
  run_cmd->add_option("--a", run_a, "Aspiration rate a");
  run_cmd->add_option("--K", run_K, "Fermi noise K");
  run_cmd->add_option("--l", run_l, "Loner payoff l");
  run_cmd->add_option("--snapshots", run_snapshots, "Comma-separated snapshot steps");
  run_cmd->add_option("--prefix", run_prefix, "Output file prefix");

  // sweep
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid over (A, b) with replicates: sweep CSV");
  CommonOptions sweep_common;
  InitOptions sweep_init;
  std::optional<std::vector<double>> sweep_A, sweep_b;
  std::optional<std::size_t> sweep_reps;
  std::size_t sweep_par = 1;
  std::string sweep_prefix = "sweep";
  sweep_common.add_to(*sweep_cmd);
  sweep_init.add_to(*sweep_cmd);
  sweep_cmd->add_option("--A-values", sweep_A, "A grid (default 0, 0.4, ..., 2.4)")->delimiter(',');
  sweep_cmd->add_option("--b-values", sweep_b, "b grid (default 1.1, 1.2, ..., 2.0)")->delimiter(',');
  sweep_cmd->add_option("--replicates", sweep_reps, "Replicates per cell (default 20)");
  sweep_cmd->add_option("--parallelism", sweep_par, "Worker threads");
  sweep_cmd->add_option("--prefix", sweep_prefix, "Output file prefix");

  // scan
  CLI::App* scan_cmd = app.add_subcommand("scan", "Stable fractions versus A at fixed b");
  CommonOptions scan_common;
  InitOptions scan_init;
  std::optional<double> scan_b;
  double scan_lo = 0.05, scan_hi = 1.2, scan_step = 0.05;
  std::optional<std::size_t> scan_reps;
  std::size_t scan_par = 1;
  std::string scan_prefix = "scan";
  scan_common.add_to(*scan_cmd);
  scan_init.add_to(*scan_cmd);
  scan_cmd->add_option("--b", scan_b, "Temptation b (default 1.6)");
  scan_cmd->add_option("--A-from", scan_lo, "First A");
  scan_cmd->add_option("--A-to", scan_hi, "Last A (inclusive)");
  scan_cmd->add_option("--A-step", scan_step, "A increment");
  scan_cmd->add_option("--replicates", scan_reps, "Replicates per A (default 20)");
  scan_cmd->add_option("--parallelism", scan_par, "Worker threads");
  scan_cmd->add_option("--prefix", scan_prefix, "Output file prefix");

  // predict
  CLI::App* predict_cmd = app.add_subcommand("predict", "Closed-form stable cooperator fraction");
  double pr_A = 0.0, pr_rc0 = 1.0 / 3.0, pr_rd0 = 1.0 / 3.0, pr_rl0 = 1.0 / 3.0, pr_l = 0.3;
  bool pr_oracle = false;
  predict_cmd->add_option("--A", pr_A, "Initial aspiration A in (0, 1.2]")->required();
  predict_cmd->add_option("--rc0", pr_rc0, "Initial cooperator fraction");
  predict_cmd->add_option("--rd0", pr_rd0, "Initial defector fraction");
  predict_cmd->add_option("--rl0", pr_rl0, "Initial loner fraction");
  predict_cmd->add_option("--l", pr_l, "Loner payoff");
  predict_cmd->add_flag("--oracle", pr_oracle, "Also print the enumerated dissatisfaction probability");

  // scenario
  CLI::App* scen_cmd = app.add_subcommand("scenario", "Preset configuration for a figure scenario");
  std::string scen_name;
  bool scen_run = false;
  CommonOptions scen_common;
  scen_cmd->add_option("name", scen_name, "fig3 | fig4 | fig5 | fig6 | fig7 | fig8 | fig9")
      ->required()
      ->check(CLI::IsMember(scenario_names()));
  scen_cmd->add_flag("--run", scen_run, "Execute the scenario and write its outputs");
  scen_common.add_to(*scen_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run_cmd) {
      KeyValues kv = run_common.config.empty() ? KeyValues{} : read_config_file(run_common.config);
      run_common.apply(kv);
      run_init.apply(kv);
      if (run_b) kv["b"] = format_double(*run_b);
      if (run_A) kv["A"] = format_double(*run_A);
      if (run_a) kv["a"] = format_double(*run_a);
      if (run_K) kv["K"] = format_double(*run_K);
      if (run_l) kv["l"] = format_double(*run_l);
      if (run_snapshots) kv["snapshots"] = *run_snapshots;
      const fs::path base = run_common.config.empty() ? fs::path{} : fs::path(run_common.config).parent_path();
      AnyConfig any = config_from_key_values(kv, base);
      if (!std::holds_alternative<RunConfig>(any)) throw ConfigError("run needs a single-run config, got a sweep");
      return run_command(std::get<RunConfig>(any), run_common.out(), run_prefix, out);
    }

    if (*sweep_cmd) {
      KeyValues kv = sweep_common.config.empty() ? KeyValues{} : read_config_file(sweep_common.config);
      sweep_common.apply(kv);
      sweep_init.apply(kv);
      if (sweep_A) kv["sweep.A"] = join_doubles(*sweep_A);
      if (sweep_b) kv["sweep.b"] = join_doubles(*sweep_b);
      if (!kv.count("sweep.A")) kv["sweep.A"] = "0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.4";
      if (!kv.count("sweep.b")) kv["sweep.b"] = join_doubles(decimal_grid(1.1, 2.0, 0.1));
      if (sweep_reps) kv["sweep.replicates"] = std::to_string(*sweep_reps);
      const fs::path base = sweep_common.config.empty() ? fs::path{} : fs::path(sweep_common.config).parent_path();
      const SweepConfig sc = std::get<SweepConfig>(config_from_key_values(kv, base));
      const SweepResult result = run_sweep(sc, sweep_par);
      const Provenance prov = describe(sc);
      const fs::path dir = sweep_common.out();
      const fs::path csv = dir / (sweep_prefix + ".csv");
      const fs::path raw = dir / (sweep_prefix + "_replicates.csv");
      write_sweep_csv(result, csv, prov);
      write_sweep_replicates_csv(result, raw, prov);
      out << "wrote " << csv.string() << " and " << raw.filename().string() << '\n';
      return 0;
    }

    if (*scan_cmd) {
      KeyValues kv = scan_common.config.empty() ? KeyValues{} : read_config_file(scan_common.config);
      scan_common.apply(kv);
      scan_init.apply(kv);
      const std::vector<double> grid = decimal_grid(scan_lo, scan_hi, scan_step);
      double b = scan_b.value_or(1.6);
      if (!scan_b && kv.count("b")) b = std::stod(kv.at("b"));
      kv.erase("A");
      kv.erase("b");
      kv.erase("sweep.A");
      kv["sweep.A"] = join_doubles(grid);
      kv["sweep.b"] = format_double(b);
      if (scan_reps) kv["sweep.replicates"] = std::to_string(*scan_reps);
      const fs::path base = scan_common.config.empty() ? fs::path{} : fs::path(scan_common.config).parent_path();
      const SweepConfig sc = std::get<SweepConfig>(config_from_key_values(kv, base));
      const TransitionScan scan = transition_scan(grid, b, sc, scan_par);
      const fs::path csv = scan_common.out() / (scan_prefix + ".csv");
      write_scan_csv(scan, csv, describe(sc));
      out << "A,rL_mean,jump_L\n";
      for (std::size_t i = 0; i < scan.columns.size(); ++i) {
        out << format_double(scan.columns[i].A) << ',' << fmt6(scan.columns[i].mean.loners) << ','
            << (i < scan.jumps.size() ? fmt6(scan.jumps[i].loners) : std::string()) << '\n';
      }
      out << "wrote " << csv.string() << '\n';
      return 0;
    }

    if (*predict_cmd) {
      const InitialFractions f{pr_rc0, pr_rd0, pr_rl0};
      const double r = predicted_cooperator_fraction(pr_A, f, pr_l);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", r);
      out << buf << '\n';
      if (pr_oracle) {
        GameParams p;
        p.loner_payoff = pr_l;
        std::snprintf(buf, sizeof(buf), "%.6f",
                      dissatisfaction_oracle(pr_A, f, p, OracleScope::NoCooperatorNeighbors));
        out << "oracle_isolated_dissatisfied " << buf << '\n';
        std::snprintf(buf, sizeof(buf), "%.6f", dissatisfaction_oracle(pr_A, f, p));
        out << "oracle_all_dissatisfied " << buf << '\n';
      }
      return 0;
    }

    if (*scen_cmd) {
      RunConfig rc = scenario_config(scen_name, scen_common.seed.value_or(1));
      if (scen_common.size) rc.dim = LatticeDim(*scen_common.size);
      if (scen_common.protocol && *scen_common.protocol == "paper") rc.steps = kPaperSteps;
      if (scen_common.steps) rc.steps = *scen_common.steps;
      if (scen_common.window) rc.measure_window = *scen_common.window;
      rc.measure_window = std::min(rc.measure_window, rc.steps);
      std::erase_if(rc.snapshot_steps, [&](std::size_t t) { return t > rc.steps; });
      if (!scen_run) {
        for (const auto& line : describe(rc)) out << line << '\n';
        return 0;
      }
      return run_command(rc, scen_common.out(), scen_name, out);
    }
  } catch (const std::exception& e) {
    err << "opd: error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace opd
