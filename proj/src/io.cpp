#include "opd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace opd {

namespace fs = std::filesystem;

FormatError::FormatError(const fs::path& path, std::size_t line, const std::string& what)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_provenance(std::ostream& out, const std::string& kind, const Provenance& provenance) {
  out << "# opd " << kind << " v1\n";
  for (const auto& line : provenance) out << "# " << line << '\n';
}

std::ifstream open_for_read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

bool is_comment(const std::string& line) {
  return line == "#" || line.rfind("# ", 0) == 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw FormatError(path, line, "expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const fs::path& path, std::size_t line) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw FormatError(path, line, "expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

// Reads "key=value key=value ..." into (key, value) pairs.
std::vector<std::pair<std::string, std::string>> parse_header(const std::string& line,
                                                              const fs::path& path,
                                                              std::size_t lineno) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError(path, lineno, "malformed header field '" + token + "'");
    }
    kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return kv;
}

// Returns the first non-comment line and its 1-based number.
std::pair<std::string, std::size_t> next_content_line(std::istream& in, std::size_t& lineno) {
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!is_comment(line)) return {line, lineno};
  }
  return {{}, 0};
}

}  // namespace

void write_timeseries_csv(const FractionSeries& series, const fs::path& path,
                          const Provenance& provenance) {
  auto out = open_for_write(path);
  write_provenance(out, "timeseries", provenance);
  out << "step,r_C,r_D,r_L\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    const Fractions f = series.at(t);
    out << t << ',' << fixed6(f.cooperators) << ',' << fixed6(f.defectors) << ','
        << fixed6(f.loners) << '\n';
  }
  const Fractions s = series.stable_means();
  out << "#stable," << fixed6(s.cooperators) << ',' << fixed6(s.defectors) << ','
      << fixed6(s.loners) << '\n';
  finish(out, path);
}

ParsedTimeseries read_timeseries_csv(const fs::path& path) {
  auto in = open_for_read(path);
  ParsedTimeseries parsed;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_comment(line)) {
      if (lineno == 1 && line.rfind("# opd ", 0) == 0) continue;  // file banner
      if (line.size() > 2) parsed.provenance.push_back(line.substr(2));
      continue;
    }
    if (!header_seen) {
      if (line != "step,r_C,r_D,r_L") throw FormatError(path, lineno, "expected time-series header");
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw FormatError(path, lineno, "expected 4 comma-separated fields");
    const Fractions f{parse_double(fields[1], path, lineno), parse_double(fields[2], path, lineno),
                      parse_double(fields[3], path, lineno)};
    if (fields[0] == "#stable") {
      parsed.stable = f;
    } else {
      parsed.rows.push_back({parse_u64(fields[0], path, lineno), f});
    }
  }
  if (!header_seen) throw FormatError(path, lineno, "missing time-series header");
  return parsed;
}

void write_sweep_csv(const SweepResult& result, const fs::path& path, const Provenance& provenance) {
  std::vector<const SweepCell*> rows;
  for (const auto& c : result.cells) rows.push_back(&c);
  std::stable_sort(rows.begin(), rows.end(), [](const SweepCell* x, const SweepCell* y) {
    return x->A != y->A ? x->A < y->A : x->b < y->b;
  });

  auto out = open_for_write(path);
  Provenance prov = provenance;
  prov.push_back("config_hash = " + std::to_string(result.config_hash));
  write_provenance(out, "sweep", prov);
  out << "A,b,rC_mean,rC_std,rD_mean,rD_std,rL_mean,rL_std,replicates\n";
  for (const SweepCell* c : rows) {
    out << format_double(c->A) << ',' << format_double(c->b) << ',' << fixed6(c->mean.cooperators)
        << ',' << fixed6(c->stddev.cooperators) << ',' << fixed6(c->mean.defectors) << ','
        << fixed6(c->stddev.defectors) << ',' << fixed6(c->mean.loners) << ','
        << fixed6(c->stddev.loners) << ',' << c->replicate_means.size() << '\n';
  }
  finish(out, path);
}

void write_sweep_replicates_csv(const SweepResult& result, const fs::path& path,
                                const Provenance& provenance) {
  auto out = open_for_write(path);
  Provenance prov = provenance;
  prov.push_back("config_hash = " + std::to_string(result.config_hash));
  write_provenance(out, "sweep-replicates", prov);
  out << "A,b,replicate,seed,r_C,r_D,r_L\n";
  for (const auto& c : result.cells) {
    for (std::size_t k = 0; k < c.replicate_means.size(); ++k) {
      const Fractions& f = c.replicate_means[k];
      out << format_double(c.A) << ',' << format_double(c.b) << ',' << k << ',' << c.seeds[k] << ','
          << format_double(f.cooperators) << ',' << format_double(f.defectors) << ','
          << format_double(f.loners) << '\n';
    }
  }
  finish(out, path);
}

void write_scan_csv(const TransitionScan& scan, const fs::path& path, const Provenance& provenance) {
  auto out = open_for_write(path);
  Provenance prov = provenance;
  prov.push_back("b = " + format_double(scan.b));
  write_provenance(out, "scan", prov);
  out << "A,rC_mean,rC_std,rD_mean,rD_std,rL_mean,rL_std,replicates,jump_C,jump_D,jump_L\n";
  for (std::size_t i = 0; i < scan.columns.size(); ++i) {
    const SweepCell& c = scan.columns[i];
    out << format_double(c.A) << ',' << fixed6(c.mean.cooperators) << ','
        << fixed6(c.stddev.cooperators) << ',' << fixed6(c.mean.defectors) << ','
        << fixed6(c.stddev.defectors) << ',' << fixed6(c.mean.loners) << ','
        << fixed6(c.stddev.loners) << ',' << c.replicate_means.size();
    if (i < scan.jumps.size()) {
      const Fractions& j = scan.jumps[i];
      out << ',' << fixed6(j.cooperators) << ',' << fixed6(j.defectors) << ',' << fixed6(j.loners);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  finish(out, path);
}

SnapshotMeta snapshot_meta(const RunConfig& config, std::size_t step) {
  return {config.dim.side(),         step,
          config.initial_aspiration, config.params.temptation,
          config.params.aspiration_rate, config.params.noise,
          config.params.loner_payoff, config.seed};
}

SnapshotPaths snapshot_paths(const fs::path& dir, const std::string& prefix, std::size_t step) {
  char tag[32];
  std::snprintf(tag, sizeof(tag), "_t%06zu", step);
  return {dir / (prefix + tag + "_strategies.txt"), dir / (prefix + tag + "_aspirations.txt")};
}

void write_strategy_snapshot(const StrategyGrid& grid, const SnapshotMeta& meta, const fs::path& path,
                             const Provenance& provenance) {
  if (meta.side != grid.dim.side()) throw std::invalid_argument("snapshot header side does not match grid");
  auto out = open_for_write(path);
  write_provenance(out, "snapshot", provenance);
  out << "L=" << meta.side << " t=" << meta.step << " A=" << format_double(meta.A)
      << " b=" << format_double(meta.b) << " a=" << format_double(meta.a)
      << " K=" << format_double(meta.K) << " l=" << format_double(meta.l) << " seed=" << meta.seed
      << '\n';
  const std::size_t L = grid.dim.side();
  std::string row(L, '?');
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) row[c] = to_char(grid.at(r, c));
    out << row << '\n';
  }
  finish(out, path);
}

void write_aspiration_heatmap(const LatticeDim& dim, std::span<const double> aspirations,
                              std::size_t step, const fs::path& path, const Provenance& provenance) {
  if (aspirations.size() != dim.cell_count()) {
    throw std::invalid_argument("aspiration field size does not match lattice");
  }
  for (double v : aspirations) {
    if (!std::isfinite(v)) throw std::invalid_argument("aspiration field contains non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(aspirations.begin(), aspirations.end());
  auto out = open_for_write(path);
  write_provenance(out, "aspiration-heatmap", provenance);
  out << "L=" << dim.side() << " t=" << step << " min=" << format_double(*lo)
      << " max=" << format_double(*hi) << '\n';
  const std::size_t L = dim.side();
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      if (c) out << ' ';
      out << format_double(aspirations[dim.index(r, c)]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_snapshot(const Snapshot& snapshot, const SnapshotMeta& meta, const SnapshotPaths& paths,
                    const Provenance& provenance) {
  write_strategy_snapshot(snapshot.grid, meta, paths.strategies, provenance);
  write_aspiration_heatmap(snapshot.grid.dim, snapshot.aspirations, snapshot.step, paths.aspirations,
                           provenance);
}

void write_snapshot(const LatticeState& state, const SnapshotMeta& meta, const SnapshotPaths& paths,
                    const Provenance& provenance) {
  write_snapshot(Snapshot{state.step, state.grid(), state.aspirations}, meta, paths, provenance);
}

LoadedStrategies read_strategy_snapshot(const fs::path& path) {
  auto in = open_for_read(path);
  std::size_t lineno = 0;
  const auto [header, header_line] = next_content_line(in, lineno);
  if (header_line == 0) throw FormatError(path, lineno, "missing snapshot header");

  SnapshotMeta meta;
  bool have_side = false;
  for (const auto& [key, value] : parse_header(header, path, header_line)) {
    if (key == "L") {
      meta.side = parse_u64(value, path, header_line);
      have_side = true;
    } else if (key == "t") {
      meta.step = parse_u64(value, path, header_line);
    } else if (key == "A") {
      meta.A = parse_double(value, path, header_line);
    } else if (key == "b") {
      meta.b = parse_double(value, path, header_line);
    } else if (key == "a") {
      meta.a = parse_double(value, path, header_line);
    } else if (key == "K") {
      meta.K = parse_double(value, path, header_line);
    } else if (key == "l") {
      meta.l = parse_double(value, path, header_line);
    } else if (key == "seed") {
      meta.seed = parse_u64(value, path, header_line);
    } else {
      throw FormatError(path, header_line, "unknown header field '" + key + "'");
    }
  }
  if (!have_side) throw FormatError(path, header_line, "header lacks L");
  std::optional<LatticeDim> dim;
  try {
    dim.emplace(meta.side);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path, header_line, e.what());
  }

  StrategyGrid grid(*dim);
  std::string line;
  for (std::size_t r = 0; r < meta.side; ++r) {
    if (!std::getline(in, line)) throw FormatError(path, lineno + 1, "expected " + std::to_string(meta.side) + " grid rows");
    ++lineno;
    if (line.size() != meta.side) {
      throw FormatError(path, lineno, "row has " + std::to_string(line.size()) + " cells, expected " +
                                          std::to_string(meta.side));
    }
    for (std::size_t c = 0; c < meta.side; ++c) {
      try {
        grid.at(r, c) = strategy_from_char(line[c]);
      } catch (const std::invalid_argument& e) {
        throw FormatError(path, lineno, e.what());
      }
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty()) throw FormatError(path, lineno, "unexpected content after grid");
  }
  return {meta, std::move(grid)};
}

LoadedHeatmap read_aspiration_heatmap(const fs::path& path) {
  auto in = open_for_read(path);
  std::size_t lineno = 0;
  const auto [header, header_line] = next_content_line(in, lineno);
  if (header_line == 0) throw FormatError(path, lineno, "missing heat-map header");

  LoadedHeatmap map;
  bool have_side = false, have_min = false, have_max = false;
  for (const auto& [key, value] : parse_header(header, path, header_line)) {
    if (key == "L") {
      map.side = parse_u64(value, path, header_line);
      have_side = true;
    } else if (key == "t") {
      map.step = parse_u64(value, path, header_line);
    } else if (key == "min") {
      map.min = parse_double(value, path, header_line);
      have_min = true;
    } else if (key == "max") {
      map.max = parse_double(value, path, header_line);
      have_max = true;
    } else {
      throw FormatError(path, header_line, "unknown header field '" + key + "'");
    }
  }
  if (!have_side || !have_min || !have_max) throw FormatError(path, header_line, "header needs L, min and max");
  if (map.side < LatticeDim::kMinSide) throw FormatError(path, header_line, "L must be >= 3");

  map.values.reserve(map.side * map.side);
  std::string line;
  for (std::size_t r = 0; r < map.side; ++r) {
    if (!std::getline(in, line)) throw FormatError(path, lineno + 1, "expected " + std::to_string(map.side) + " rows");
    ++lineno;
    std::istringstream row(line);
    std::string cell;
    std::size_t n = 0;
    while (row >> cell) {
      const double v = parse_double(cell, path, lineno);
      if (!std::isfinite(v)) throw FormatError(path, lineno, "non-finite aspiration value");
      map.values.push_back(v);
      ++n;
    }
    if (n != map.side) {
      throw FormatError(path, lineno, "row has " + std::to_string(n) + " values, expected " +
                                          std::to_string(map.side));
    }
  }
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  if (*lo != map.min || *hi != map.max) {
    throw FormatError(path, header_line, "header min/max do not match the body");
  }
  return map;
}

LoadedSnapshot read_snapshot(const SnapshotPaths& paths) {
  LoadedStrategies s = read_strategy_snapshot(paths.strategies);
  LoadedHeatmap h = read_aspiration_heatmap(paths.aspirations);
  if (h.side != s.meta.side || h.step != s.meta.step) {
    throw FormatError(paths.aspirations, 1, "heat map does not match strategy snapshot (L or t)");
  }
  return {s.meta, std::move(s.grid), std::move(h.values)};
}

}  // namespace opd
