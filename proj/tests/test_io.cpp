#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "opd/config.hpp"
#include "opd/io.hpp"
#include "test_support.hpp"

using namespace opd;

namespace {

constexpr Strategy C = Strategy::Cooperator;
constexpr Strategy D = Strategy::Defector;
constexpr Strategy L = Strategy::Loner;

RunConfig small_run() {
  RunConfig cfg;
  cfg.dim = LatticeDim(10);
  cfg.params = GameParams::boundary(1.6);
  cfg.initial_aspiration = 1.6;
  cfg.steps = 30;
  cfg.measure_window = 10;
  cfg.seed = 5;
  cfg.snapshot_steps = {0, 30};
  return cfg;
}

template <class Fn>
std::string format_error_of(Fn&& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("format_double is the shortest round-trip form") {
  CHECK(format_double(0.9) == "0.9");
  CHECK(format_double(1.2000000000000002) == "1.2000000000000002");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("timeseries round trip") {
  TempDir dir;
  const RunResult r = run(small_run());
  write_timeseries_csv(r.series, dir / "ts.csv", {"seed = 5"});
  const std::string text = slurp(dir / "ts.csv");
  CHECK(text.rfind("# opd timeseries v1\n# seed = 5\nstep,r_C,r_D,r_L\n", 0) == 0);
  const ParsedTimeseries parsed = read_timeseries_csv(dir / "ts.csv");
  CHECK(parsed.provenance == Provenance{"seed = 5"});
  REQUIRE(parsed.rows.size() == 31);
  for (std::size_t t = 0; t < parsed.rows.size(); ++t) {
    CHECK(parsed.rows[t].step == t);
    CHECK(parsed.rows[t].fractions.cooperators == doctest::Approx(r.series.at(t).cooperators).epsilon(1e-6));
    const auto& f = parsed.rows[t].fractions;
    CHECK(f.cooperators + f.defectors + f.loners == doctest::Approx(1.0).epsilon(2e-6));
  }
  REQUIRE(parsed.stable.has_value());
  CHECK(parsed.stable->loners == doctest::Approx(r.series.stable_means().loners).epsilon(1e-6));
}

TEST_CASE("timeseries reader rejects malformed rows with line numbers") {
  TempDir dir;
  spit(dir / "bad.csv", "# opd timeseries v1\nstep,r_C,r_D,r_L\n0,0.5,0.5,0\n1,0.5,x,0\n");
  CHECK(format_error_of([&] { read_timeseries_csv(dir / "bad.csv"); }).find(":4:") != std::string::npos);
  spit(dir / "hdr.csv", "# opd timeseries v1\nstep,r_C,r_L\n");
  CHECK(format_error_of([&] { read_timeseries_csv(dir / "hdr.csv"); }).find(":2:") != std::string::npos);
  CHECK_THROWS(read_timeseries_csv(dir / "missing.csv"));
}

TEST_CASE("strategy snapshot round trip") {
  TempDir dir;
  const RunConfig cfg = small_run();
  const RunResult r = run(cfg);
  REQUIRE(r.snapshots.size() == 2);
  const SnapshotPaths paths = snapshot_paths(dir.path, "fig", 30);
  CHECK(paths.strategies.filename() == "fig_t000030_strategies.txt");
  CHECK(paths.aspirations.filename() == "fig_t000030_aspirations.txt");
  write_snapshot(r.snapshots[1], snapshot_meta(cfg, 30), paths);
  const LoadedSnapshot back = read_snapshot(paths);
  CHECK(back.grid == r.final_state.grid());
  CHECK(back.aspirations == r.final_state.aspirations);  // bitwise, via shortest round-trip
  CHECK(back.meta.side == 10);
  CHECK(back.meta.step == 30);
  CHECK(back.meta.A == 1.6);
  CHECK(back.meta.b == 1.6);
  CHECK(back.meta.seed == 5);
  CHECK(init_explicit(cfg.dim, back.grid) == r.final_state.grid());

  // overload taking a live state writes the same files
  const SnapshotPaths again = snapshot_paths(dir.path, "live", 30);
  write_snapshot(r.final_state, snapshot_meta(cfg, 30), again);
  CHECK(slurp(again.strategies) == slurp(paths.strategies));
  CHECK(slurp(again.aspirations) == slurp(paths.aspirations));
}

TEST_CASE("all-loner snapshot body") {
  TempDir dir;
  const StrategyGrid g(LatticeDim(3), L);
  SnapshotMeta meta;
  meta.side = 3;
  write_strategy_snapshot(g, meta, dir / "s.txt");
  const std::string text = slurp(dir / "s.txt");
  CHECK(text.find("\nLLL\nLLL\nLLL\n") != std::string::npos);
  CHECK(read_strategy_snapshot(dir / "s.txt").grid == g);
}

TEST_CASE("snapshot readers reject malformed files") {
  TempDir dir;
  StrategyGrid g(LatticeDim(3), D);
  g.at(1, 1) = C;
  SnapshotMeta meta;
  meta.side = 3;
  write_strategy_snapshot(g, meta, dir / "ok.txt");
  std::string text = slurp(dir / "ok.txt");

  std::string bad_char = text;
  bad_char.replace(bad_char.find("DCD"), 3, "DXD");
  spit(dir / "x.txt", bad_char);
  const std::string msg = format_error_of([&] { read_strategy_snapshot(dir / "x.txt"); });
  CHECK(msg.find("x.txt:") != std::string::npos);

  std::string short_row = text;
  short_row.replace(short_row.find("DCD"), 3, "DC");
  spit(dir / "short.txt", short_row);
  CHECK_FALSE(format_error_of([&] { read_strategy_snapshot(dir / "short.txt"); }).empty());

  std::string missing_row = text.substr(0, text.rfind("DDD"));
  spit(dir / "rows.txt", missing_row);
  CHECK_FALSE(format_error_of([&] { read_strategy_snapshot(dir / "rows.txt"); }).empty());
}

TEST_CASE("aspiration heat map") {
  TempDir dir;
  const LatticeDim dim(3);
  const std::vector<double> v{0.1, 0.2, 0.3, 1.2000000000000002, 5e-324, 2.0, 0.0, 0.7, 1.6};
  write_aspiration_heatmap(dim, v, 7, dir / "h.txt");
  const LoadedHeatmap h = read_aspiration_heatmap(dir / "h.txt");
  CHECK(h.side == 3);
  CHECK(h.step == 7);
  CHECK(h.min == 0.0);
  CHECK(h.max == 2.0);
  CHECK(h.values == v);

  std::string text = slurp(dir / "h.txt");
  std::string lie = text;
  lie.replace(lie.find("max=2"), 5, "max=3");
  spit(dir / "lie.txt", lie);
  CHECK_FALSE(format_error_of([&] { read_aspiration_heatmap(dir / "lie.txt"); }).empty());

  std::string nan = text;
  nan.replace(nan.find("0.7"), 3, "nan");
  spit(dir / "nan.txt", nan);
  CHECK_FALSE(format_error_of([&] { read_aspiration_heatmap(dir / "nan.txt"); }).empty());

  const std::vector<double> bad{0.1, NAN, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  CHECK_THROWS(write_aspiration_heatmap(dim, bad, 0, dir / "bad.txt"));
}

TEST_CASE("key-value parsing") {
  const KeyValues kv = parse_key_values("# comment\nb = 1.6\n\n  A=0.3   # trailing\nseed = 1\n");
  CHECK(kv.at("b") == "1.6");
  CHECK(kv.at("A") == "0.3");
  CHECK(kv.size() == 3);
  CHECK_THROWS_AS(parse_key_values("b = 1\nb = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("just words\n"), ConfigError);
  try {
    parse_key_values("b = 1\n\nb = 2\n", "x.cfg");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.cfg:3") != std::string::npos);
  }
}

TEST_CASE("config loading") {
  TempDir dir;

  SUBCASE("minimal run file") {
    spit(dir / "min.cfg", "b = 1.6\nA = 0.3\nseed = 42\n");
    const AnyConfig any = load_config(dir / "min.cfg");
    REQUIRE(std::holds_alternative<RunConfig>(any));
    const RunConfig& r = std::get<RunConfig>(any);
    CHECK(r.params.temptation == 1.6);
    CHECK(r.initial_aspiration == 0.3);
    CHECK(r.seed == 42);
    CHECK(r.dim.side() == 100);
    CHECK(r.steps == 5000);
    CHECK(r.measure_window == 1000);
    CHECK(r.params.aspiration_rate == 0.05);
    CHECK(r.params.noise == 0.1);
    CHECK(r.params.loner_payoff == 0.3);
    CHECK(r.init.kind == InitKind::RandomFractions);
  }
  SUBCASE("protocol and aspiration regime set the default steps") {
    spit(dir / "hi.cfg", "b = 1.6\nA = 1.6\nseed = 1\n");
    CHECK(std::get<RunConfig>(load_config(dir / "hi.cfg")).steps == 20000);
    spit(dir / "paper.cfg", "b = 1.6\nA = 0.3\nseed = 1\nprotocol = paper\n");
    CHECK(std::get<RunConfig>(load_config(dir / "paper.cfg")).steps == 100000);
    spit(dir / "short.cfg", "b = 1.6\nA = 0.3\nseed = 1\nsteps = 200\n");
    CHECK(std::get<RunConfig>(load_config(dir / "short.cfg")).measure_window == 200);
  }
  SUBCASE("aspiration rate out of range names the key") {
    spit(dir / "a.cfg", "b = 1.6\nA = 0.3\nseed = 1\na = 1.5\n");
    try {
      load_config(dir / "a.cfg");
      FAIL("expected rejection");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
  }
  SUBCASE("fractions summing to 0.9 are rejected") {
    spit(dir / "f.cfg", "b = 1.6\nA = 0.3\nseed = 1\ninit.rc0 = 0.3\ninit.rd0 = 0.3\ninit.rl0 = 0.3\n");
    CHECK_THROWS_AS(load_config(dir / "f.cfg"), ConfigError);
  }
  SUBCASE("unknown keys are rejected") {
    spit(dir / "u.cfg", "b = 1.6\nA = 0.3\nseed = 1\nlattice = 5\n");
    CHECK_THROWS_AS(load_config(dir / "u.cfg"), ConfigError);
  }
  SUBCASE("missing required keys and bad numbers") {
    spit(dir / "m.cfg", "b = 1.6\nA = 0.3\n");
    CHECK_THROWS_AS(load_config(dir / "m.cfg"), ConfigError);
    spit(dir / "n.cfg", "b = 1.6x\nA = 0.3\nseed = 1\n");
    CHECK_THROWS_AS(load_config(dir / "n.cfg"), ConfigError);
    spit(dir / "w.cfg", "b = 1.6\nA = 0.3\nseed = 1\nsteps = 10\nwindow = 20\n");
    CHECK_THROWS_AS(load_config(dir / "w.cfg"), ConfigError);
    spit(dir / "v.cfg", "format_version = 2\nb = 1.6\nA = 0.3\nseed = 1\n");
    CHECK_THROWS_AS(load_config(dir / "v.cfg"), ConfigError);
    CHECK_THROWS(load_config(dir / "absent.cfg"));
  }
  SUBCASE("explicit grid from a snapshot file") {
    StrategyGrid g(LatticeDim(4), D);
    g.at(0, 0) = C;
    g.at(3, 3) = L;
    SnapshotMeta meta;
    meta.side = 4;
    write_strategy_snapshot(g, meta, dir / "grid.txt");
    spit(dir / "e.cfg", "b = 1.6\nA = 0.3\nseed = 1\nsize = 4\ninit.kind = explicit\ninit.grid = grid.txt\n");
    const RunConfig r = std::get<RunConfig>(load_config(dir / "e.cfg"));
    REQUIRE(r.init.explicit_grid.has_value());
    CHECK(*r.init.explicit_grid == g);
    spit(dir / "e5.cfg", "b = 1.6\nA = 0.3\nseed = 1\nsize = 5\ninit.kind = explicit\ninit.grid = grid.txt\n");
    CHECK_THROWS_AS(load_config(dir / "e5.cfg"), ConfigError);
  }
  SUBCASE("sweep file") {
    spit(dir / "s.cfg", "seed = 9\nsweep.A = 0, 0.8\nsweep.b = 1.2, 1.5, 1.9\nsweep.replicates = 4\nsize = 20\n");
    const AnyConfig any = load_config(dir / "s.cfg");
    REQUIRE(std::holds_alternative<SweepConfig>(any));
    const SweepConfig& s = std::get<SweepConfig>(any);
    CHECK(s.A_values == std::vector<double>{0.0, 0.8});
    CHECK(s.b_values == std::vector<double>{1.2, 1.5, 1.9});
    CHECK(s.replicates == 4);
    CHECK(s.base_seed == 9);
    CHECK(s.base.dim.side() == 20);
    spit(dir / "s2.cfg", "seed = 9\nsweep.A = 0\nsweep.b = 1.2\nb = 1.6\n");
    CHECK_THROWS_AS(load_config(dir / "s2.cfg"), ConfigError);
  }
  SUBCASE("describe reloads to the same configuration") {
    spit(dir / "d.cfg",
         "b = 1.9\nA = 2.4\nseed = 77\nsize = 50\nsteps = 300\nwindow = 100\nsnapshots = 0, 10\n"
         "init.kind = clusters\ninit.rc0 = 0.1\ninit.rd0 = 0.8\ninit.rl0 = 0.1\ninit.clusters = 4\nK = 0.2\n");
    const RunConfig a = std::get<RunConfig>(load_config(dir / "d.cfg"));
    std::string echoed;
    for (const auto& line : describe(a)) echoed += line + "\n";
    spit(dir / "d2.cfg", echoed);
    const RunConfig b = std::get<RunConfig>(load_config(dir / "d2.cfg"));
    CHECK(describe(a) == describe(b));
    CHECK(b.init.kind == InitKind::MixedClusters);
    CHECK(b.init.cluster_count == 4);
    CHECK(b.params.noise == 0.2);
    CHECK(b.snapshot_steps == std::vector<std::size_t>{0, 10});
    CHECK(run(a).final_state.strategies == run(b).final_state.strategies);
  }
}
