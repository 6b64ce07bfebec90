#ifndef OPD_IO_HPP
#define OPD_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opd/dynamics.hpp"
#include "opd/init.hpp"
#include "opd/series.hpp"
#include "opd/sweep.hpp"

namespace opd {

// Malformed input file; the message carries "path:line: reason".
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::filesystem::path& path, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Lines echoed as a leading "# " comment block at the top of every output file.
using Provenance = std::vector<std::string>;

// Shortest text that parses back to the same double.
std::string format_double(double v);

// --- time series ----------------------------------------------------------

// "step,r_C,r_D,r_L" with 6-decimal fractions, one row per recorded step,
// then a "#stable,<r_C>,<r_D>,<r_L>" summary row.
void write_timeseries_csv(const FractionSeries& series, const std::filesystem::path& path,
                          const Provenance& provenance = {});

struct TimeseriesRow {
  std::size_t step = 0;
  Fractions fractions;
};

struct ParsedTimeseries {
  Provenance provenance;
  std::vector<TimeseriesRow> rows;
  std::optional<Fractions> stable;
};

ParsedTimeseries read_timeseries_csv(const std::filesystem::path& path);

// --- sweeps ---------------------------------------------------------------

// "A,b,rC_mean,rC_std,rD_mean,rD_std,rL_mean,rL_std,replicates", sorted by A then b.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path,
                     const Provenance& provenance = {});

// One row per run: A, b, replicate, seed and that run's stable fractions.
void write_sweep_replicates_csv(const SweepResult& result, const std::filesystem::path& path,
                                const Provenance& provenance = {});

// "A,rC_mean,...,rL_std,replicates,jump_C,jump_D,jump_L" with the jump to the next A.
void write_scan_csv(const TransitionScan& scan, const std::filesystem::path& path,
                    const Provenance& provenance = {});

// --- snapshots ------------------------------------------------------------

struct SnapshotMeta {
  std::size_t side = 0;
  std::size_t step = 0;
  double A = 0.0;
  double b = 0.0;
  double a = 0.0;
  double K = 0.0;
  double l = 0.0;
  std::uint64_t seed = 0;
};

SnapshotMeta snapshot_meta(const RunConfig& config, std::size_t step);

struct SnapshotPaths {
  std::filesystem::path strategies;
  std::filesystem::path aspirations;
};

// <dir>/<prefix>_t<step>_strategies.txt and ..._aspirations.txt
SnapshotPaths snapshot_paths(const std::filesystem::path& dir, const std::string& prefix,
                             std::size_t step);

// Strategy grid: header line then L lines of L characters from {C, D, L}.
void write_strategy_snapshot(const StrategyGrid& grid, const SnapshotMeta& meta,
                             const std::filesystem::path& path, const Provenance& provenance = {});

// Aspiration heat map: header with L, t, min, max then L rows of L values.
void write_aspiration_heatmap(const LatticeDim& dim, std::span<const double> aspirations,
                              std::size_t step, const std::filesystem::path& path,
                              const Provenance& provenance = {});

// Writes both files of the pair.
void write_snapshot(const Snapshot& snapshot, const SnapshotMeta& meta, const SnapshotPaths& paths,
                    const Provenance& provenance = {});
void write_snapshot(const LatticeState& state, const SnapshotMeta& meta, const SnapshotPaths& paths,
                    const Provenance& provenance = {});

struct LoadedStrategies {
  SnapshotMeta meta;
  StrategyGrid grid;
};

struct LoadedHeatmap {
  std::size_t side = 0;
  std::size_t step = 0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> values;
};

LoadedStrategies read_strategy_snapshot(const std::filesystem::path& path);
LoadedHeatmap read_aspiration_heatmap(const std::filesystem::path& path);

struct LoadedSnapshot {
  SnapshotMeta meta;
  StrategyGrid grid;
  std::vector<double> aspirations;
};

// Reads both files; throws FormatError if the pair disagrees on L or t.
LoadedSnapshot read_snapshot(const SnapshotPaths& paths);

}  // namespace opd

#endif  // OPD_IO_HPP
