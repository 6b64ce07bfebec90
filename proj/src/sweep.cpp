#include "opd/sweep.hpp"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace opd {

std::size_t desk_scale_steps(double initial_aspiration) {
  return initial_aspiration <= 1.2 ? 5000 : 20000;
}

void SweepConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (A_values.empty()) throw std::invalid_argument("sweep needs at least one A value");
  if (b_values.empty()) throw std::invalid_argument("sweep needs at least one b value");
  for (double b : b_values) {
    if (!(b > base.params.reward)) {
      throw std::invalid_argument("sweep b value " + std::to_string(b) + " must exceed R");
    }
  }
  for (double A : A_values) {
    if (!std::isfinite(A)) throw std::invalid_argument("sweep A values must be finite");
  }
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t a_index, std::size_t b_index,
                             std::size_t replicate) {
  std::uint64_t h = mix64(a_index);
  h = mix64(h ^ b_index);
  h = mix64(h ^ replicate);
  return base_seed + h;
}

RunConfig cell_run_config(const SweepConfig& config, std::size_t a_index, std::size_t b_index,
                          std::size_t replicate) {
  RunConfig rc = config.base;
  rc.initial_aspiration = config.A_values.at(a_index);
  rc.params.temptation = config.b_values.at(b_index);
  rc.seed = replicate_seed(config.base_seed, a_index, b_index, replicate);
  if (config.desk_scale) {
    rc.steps = desk_scale_steps(rc.initial_aspiration);
    rc.measure_window = std::min(config.base.measure_window, rc.steps);
  }
  rc.snapshot_steps.clear();
  return rc;
}

void aggregate(SweepCell& cell) {
  const auto& reps = cell.replicate_means;
  const auto n = static_cast<double>(reps.size());
  Fractions sum;
  for (const Fractions& f : reps) {
    sum.cooperators += f.cooperators;
    sum.defectors += f.defectors;
    sum.loners += f.loners;
  }
  cell.mean = {sum.cooperators / n, sum.defectors / n, sum.loners / n};
  Fractions sq;
  for (const Fractions& f : reps) {
    sq.cooperators += (f.cooperators - cell.mean.cooperators) * (f.cooperators - cell.mean.cooperators);
    sq.defectors += (f.defectors - cell.mean.defectors) * (f.defectors - cell.mean.defectors);
    sq.loners += (f.loners - cell.mean.loners) * (f.loners - cell.mean.loners);
  }
  if (reps.size() > 1) {
    cell.stddev = {std::sqrt(sq.cooperators / (n - 1)), std::sqrt(sq.defectors / (n - 1)),
                   std::sqrt(sq.loners / (n - 1))};
  } else {
    cell.stddev = {};
  }
}

namespace {

// FNV-1a over the numeric content of the sweep configuration.
class Fnv1a {
 public:
  template <typename T>
  void add(const T& value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (unsigned char b : bytes) {
      hash_ ^= b;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::uint64_t hash_config(const SweepConfig& c) {
  Fnv1a h;
  const RunConfig& r = c.base;
  h.add(r.dim.side());
  for (double v : {r.params.reward, r.params.sucker, r.params.punishment, r.params.loner_payoff,
                   r.params.noise, r.params.aspiration_rate}) {
    h.add(v);
  }
  h.add(static_cast<int>(r.init.kind));
  h.add(r.init.fractions.cooperators);
  h.add(r.init.fractions.defectors);
  h.add(r.init.fractions.loners);
  h.add(r.init.cluster_count);
  if (r.init.explicit_grid) {
    for (Strategy s : r.init.explicit_grid->cells) h.add(s);
  }
  h.add(r.steps);
  h.add(r.measure_window);
  h.add(c.desk_scale);
  h.add(c.replicates);
  h.add(c.base_seed);
  for (double A : c.A_values) h.add(A);
  h.add(std::size_t{0xffff});
  for (double b : c.b_values) h.add(b);
  return h.value();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, std::size_t parallelism) {
  config.validate();
  const std::size_t na = config.A_values.size();
  const std::size_t nb = config.b_values.size();
  const std::size_t reps = config.replicates;
  const std::size_t jobs = na * nb * reps;

  // Resolve and validate every run before starting any of them.
  std::vector<RunConfig> runs;
  runs.reserve(jobs);
  std::set<std::uint64_t> seeds;
  for (std::size_t ai = 0; ai < na; ++ai) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      for (std::size_t k = 0; k < reps; ++k) {
        runs.push_back(cell_run_config(config, ai, bi, k));
        try {
          runs.back().validate();
        } catch (const std::exception& e) {
          std::ostringstream msg;
          msg << "sweep cell A=" << config.A_values[ai] << " b=" << config.b_values[bi]
              << " replicate " << k << ": " << e.what();
          throw std::runtime_error(msg.str());
        }
        if (!seeds.insert(runs.back().seed).second) {
          throw std::runtime_error("replicate seed collision in sweep");
        }
      }
    }
  }

  std::vector<Fractions> stable(jobs);
  std::vector<std::string> errors(jobs);
  const int threads = static_cast<int>(parallelism < 1 ? 1 : parallelism);
  const auto n = static_cast<std::ptrdiff_t>(jobs);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      stable[j] = run(runs[j], Execution::Serial).series.stable_means();
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }

  for (std::size_t j = 0; j < jobs; ++j) {
    if (!errors[j].empty()) {
      const std::size_t ai = j / (nb * reps);
      const std::size_t bi = (j / reps) % nb;
      std::ostringstream msg;
      msg << "sweep cell A=" << config.A_values[ai] << " b=" << config.b_values[bi]
          << " replicate " << j % reps << ": " << errors[j];
      throw std::runtime_error(msg.str());
    }
  }

  SweepResult result;
  result.a_count = na;
  result.b_count = nb;
  result.replicates = reps;
  result.config_hash = hash_config(config);
  result.cells.reserve(na * nb);
  for (std::size_t ai = 0; ai < na; ++ai) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      SweepCell cell;
      cell.A = config.A_values[ai];
      cell.b = config.b_values[bi];
      for (std::size_t k = 0; k < reps; ++k) {
        const std::size_t j = (ai * nb + bi) * reps + k;
        cell.replicate_means.push_back(stable[j]);
        cell.seeds.push_back(runs[j].seed);
      }
      aggregate(cell);
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

TransitionScan transition_scan(std::span<const double> A_values, double b,
                               const SweepConfig& config, std::size_t parallelism) {
  if (A_values.empty()) throw std::invalid_argument("transition scan needs at least one A value");
  for (std::size_t i = 1; i < A_values.size(); ++i) {
    if (!(A_values[i - 1] < A_values[i])) {
      throw std::invalid_argument("transition scan A values must be strictly ascending");
    }
  }
  SweepConfig sc = config;
  sc.A_values.assign(A_values.begin(), A_values.end());
  sc.b_values = {b};
  SweepResult sweep = run_sweep(sc, parallelism);

  TransitionScan scan;
  scan.b = b;
  scan.columns = std::move(sweep.cells);
  for (std::size_t i = 0; i + 1 < scan.columns.size(); ++i) {
    const Fractions& lo = scan.columns[i].mean;
    const Fractions& hi = scan.columns[i + 1].mean;
    scan.jumps.push_back({std::abs(hi.cooperators - lo.cooperators),
                          std::abs(hi.defectors - lo.defectors), std::abs(hi.loners - lo.loners)});
  }
  return scan;
}

std::vector<double> decimal_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("decimal_grid: need step > 0 and hi >= lo");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double raw = lo + static_cast<double>(i) * step;
    out.push_back(std::round(raw * 1e12) / 1e12);
  }
  return out;
}

}  // namespace opd
