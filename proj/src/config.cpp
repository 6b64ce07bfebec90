#include "opd/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace opd {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kRunKeys = {
    "format_version", "b", "A", "seed", "R", "S", "P", "l", "K", "a", "size", "steps",
    "protocol", "window", "snapshots", "init.kind", "init.rc0", "init.rd0", "init.rl0",
    "init.clusters", "init.grid"};
const std::set<std::string> kSweepKeys = {"sweep.A", "sweep.b", "sweep.replicates"};

double to_double(const KeyValues& kv, const std::string& key) {
  const std::string& text = kv.at(key);
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const KeyValues& kv, const std::string& key) { return to_u64(key, kv.at(key)); }

std::vector<std::string> list_items(const std::string& text) {
  std::vector<std::string> items;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<double> to_double_list(const KeyValues& kv, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : list_items(kv.at(key))) {
    KeyValues one{{key, item}};
    out.push_back(to_double(one, key));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

template <typename F>
void checked(const std::string& key, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

// Fields shared between run and sweep configurations. A and b are filled by the caller.
RunConfig build_base(const KeyValues& kv, const fs::path& base_dir, double A_for_defaults) {
  RunConfig rc;
  auto has = [&](const char* k) { return kv.count(k) != 0; };

  if (has("size")) {
    const auto side = to_u64(kv, "size");
    checked("size", [&] { rc.dim = LatticeDim(side); });
  }
  GameParams& p = rc.params;
  if (has("R")) p.reward = to_double(kv, "R");
  if (has("S")) p.sucker = to_double(kv, "S");
  if (has("P")) p.punishment = to_double(kv, "P");
  if (has("l")) p.loner_payoff = to_double(kv, "l");
  if (has("K")) p.noise = to_double(kv, "K");
  if (has("a")) p.aspiration_rate = to_double(kv, "a");
  if (!(p.aspiration_rate >= 0.0 && p.aspiration_rate <= 1.0)) {
    throw ConfigError("key 'a': aspiration_rate out of [0,1]");
  }
  if (!(p.noise > 0.0)) throw ConfigError("key 'K': noise must be > 0");
  if (!(p.loner_payoff > 0.0 && p.loner_payoff < 1.0)) throw ConfigError("key 'l': loner_payoff out of (0,1)");

  std::string protocol = has("protocol") ? kv.at("protocol") : "desk";
  if (protocol != "desk" && protocol != "paper") {
    throw ConfigError("key 'protocol': expected 'desk' or 'paper', got '" + protocol + "'");
  }
  if (has("steps")) {
    rc.steps = to_u64(kv, "steps");
  } else {
    rc.steps = protocol == "paper" ? kPaperSteps : desk_scale_steps(A_for_defaults);
  }
  rc.measure_window = has("window") ? to_u64(kv, "window") : std::min<std::size_t>(kDefaultWindow, rc.steps);
  if (rc.measure_window > rc.steps) {
    throw ConfigError("key 'window': measure window " + std::to_string(rc.measure_window) +
                      " exceeds steps " + std::to_string(rc.steps));
  }

  if (has("snapshots")) {
    for (const auto& item : list_items(kv.at("snapshots"))) {
      rc.snapshot_steps.push_back(to_u64("snapshots", item));
    }
  }

  InitSpec& init = rc.init;
  if (has("init.kind")) checked("init.kind", [&] { init.kind = init_kind_from_string(kv.at("init.kind")); });
  if (has("init.rc0")) init.fractions.cooperators = to_double(kv, "init.rc0");
  if (has("init.rd0")) init.fractions.defectors = to_double(kv, "init.rd0");
  if (has("init.rl0")) init.fractions.loners = to_double(kv, "init.rl0");
  checked("init.rc0", [&] { init.fractions.validate(); });
  if (has("init.clusters")) init.cluster_count = to_u64(kv, "init.clusters");
  if (init.kind == InitKind::Explicit) {
    if (!has("init.grid")) throw ConfigError("key 'init.grid': required when init.kind = explicit");
    fs::path grid_path = kv.at("init.grid");
    if (grid_path.is_relative() && !base_dir.empty()) grid_path = base_dir / grid_path;
    init.grid_source = kv.at("init.grid");
    auto loaded = read_strategy_snapshot(grid_path);
    if (!has("size")) rc.dim = loaded.grid.dim;
    init.explicit_grid = std::move(loaded.grid);
  } else if (has("init.grid")) {
    throw ConfigError("key 'init.grid': only valid with init.kind = explicit");
  }
  return rc;
}

}  // namespace

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!kRunKeys.count(key) && !kSweepKeys.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

AnyConfig config_from_key_values(const KeyValues& kv, const fs::path& base_dir) {
  for (const auto& [key, value] : kv) {
    if (!kRunKeys.count(key) && !kSweepKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
  }
  if (kv.count("format_version") && kv.at("format_version") != "1") {
    throw ConfigError("key 'format_version': unsupported version '" + kv.at("format_version") + "'");
  }
  if (!kv.count("seed")) throw ConfigError("missing required key 'seed'");
  const std::uint64_t seed = to_u64(kv, "seed");

  bool sweep = false;
  for (const auto& key : kSweepKeys) sweep = sweep || kv.count(key);

  if (!sweep) {
    for (const char* key : {"b", "A"}) {
      if (!kv.count(key)) throw ConfigError(std::string("missing required key '") + key + "'");
    }
    const double A = to_double(kv, "A");
    RunConfig rc = build_base(kv, base_dir, A);
    rc.initial_aspiration = A;
    rc.params.temptation = to_double(kv, "b");
    rc.seed = seed;
    checked("b", [&] { rc.params.validate(); });
    checked("snapshots", [&] { rc.validate(); });
    return rc;
  }

  for (const char* key : {"b", "A"}) {
    if (kv.count(key)) {
      throw ConfigError(std::string("key '") + key + "': not allowed in a sweep; use sweep." + key);
    }
  }
  for (const char* key : {"sweep.A", "sweep.b"}) {
    if (!kv.count(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }
  if (kv.count("snapshots")) throw ConfigError("key 'snapshots': not supported in a sweep");
  SweepConfig sc;
  sc.A_values = to_double_list(kv, "sweep.A");
  sc.b_values = to_double_list(kv, "sweep.b");
  sc.base = build_base(kv, base_dir, sc.A_values.front());
  sc.base.initial_aspiration = sc.A_values.front();
  sc.base.params.temptation = sc.b_values.front();
  sc.base.seed = seed;
  sc.base_seed = seed;
  sc.desk_scale = !kv.count("steps") && (!kv.count("protocol") || kv.at("protocol") == "desk");
  if (kv.count("sweep.replicates")) sc.replicates = to_u64(kv, "sweep.replicates");
  checked("sweep", [&] { sc.validate(); });
  for (double b : sc.b_values) {
    GameParams p = sc.base.params;
    p.temptation = b;
    checked("sweep.b", [&] { p.validate(); });
  }
  return sc;
}

AnyConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_key_values(parse_key_values(text.str(), path.string()), path.parent_path());
}

namespace {

void describe_base(const RunConfig& c, Provenance& out) {
  const GameParams& p = c.params;
  out.push_back("size = " + std::to_string(c.dim.side()));
  out.push_back("R = " + format_double(p.reward));
  out.push_back("S = " + format_double(p.sucker));
  out.push_back("P = " + format_double(p.punishment));
  out.push_back("l = " + format_double(p.loner_payoff));
  out.push_back("K = " + format_double(p.noise));
  out.push_back("a = " + format_double(p.aspiration_rate));
  out.push_back("init.kind = " + to_string(c.init.kind));
  out.push_back("init.rc0 = " + format_double(c.init.fractions.cooperators));
  out.push_back("init.rd0 = " + format_double(c.init.fractions.defectors));
  out.push_back("init.rl0 = " + format_double(c.init.fractions.loners));
  if (c.init.kind == InitKind::MixedClusters) {
    out.push_back("init.clusters = " + std::to_string(c.init.cluster_count));
  }
  if (c.init.kind == InitKind::Explicit) {
    out.push_back("init.grid = " + (c.init.grid_source.empty() ? std::string("<in-memory>") : c.init.grid_source));
  }
}

}  // namespace

Provenance describe(const RunConfig& c) {
  Provenance out{"format_version = 1"};
  out.push_back("b = " + format_double(c.params.temptation));
  out.push_back("A = " + format_double(c.initial_aspiration));
  out.push_back("seed = " + std::to_string(c.seed));
  describe_base(c, out);
  out.push_back("steps = " + std::to_string(c.steps));
  out.push_back("window = " + std::to_string(c.measure_window));
  if (!c.snapshot_steps.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.snapshot_steps.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(c.snapshot_steps[i]);
    }
    out.push_back("snapshots = " + s);
  }
  return out;
}

Provenance describe(const SweepConfig& c) {
  Provenance out{"format_version = 1"};
  out.push_back("seed = " + std::to_string(c.base_seed));
  describe_base(c.base, out);
  if (!c.desk_scale) out.push_back("steps = " + std::to_string(c.base.steps));
  out.push_back("window = " + std::to_string(c.base.measure_window));
  out.push_back("sweep.A = " + join(c.A_values));
  out.push_back("sweep.b = " + join(c.b_values));
  out.push_back("sweep.replicates = " + std::to_string(c.replicates));
  return out;
}

}  // namespace opd
