// Serial reference kernels against their OpenMP counterparts, plus a full step.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "opd/dynamics.hpp"
#include "opd/init.hpp"
#include "opd/kernels.hpp"

namespace {

struct Fixture {
  opd::LatticeDim dim;
  opd::Lattice lattice;
  opd::StrategyGrid grid;
  opd::PayoffTable table;
  std::vector<double> payoffs;
  std::vector<double> aspirations;

  explicit Fixture(std::size_t side)
      : dim(side),
        lattice(dim),
        grid(make_grid(dim)),
        table(opd::GameParams::boundary(1.6)),
        payoffs(dim.cell_count()),
        aspirations(dim.cell_count(), 1.6) {}

  static opd::StrategyGrid make_grid(const opd::LatticeDim& d) {
    opd::Rng rng(1);
    return opd::init_random_fractions(d, {}, rng);
  }
};

void BM_PayoffsSerial(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    opd::kernels::serial::compute_payoffs(f.grid.cells, f.lattice, f.table, f.payoffs);
    benchmark::DoNotOptimize(f.payoffs.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_PayoffsOmp(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  omp_set_num_threads(static_cast<int>(st.range(1)));
  for (auto _ : st) {
    opd::kernels::omp::compute_payoffs(f.grid.cells, f.lattice, f.table, f.payoffs);
    benchmark::DoNotOptimize(f.payoffs.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_RelaxSerial(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  opd::kernels::serial::compute_payoffs(f.grid.cells, f.lattice, f.table, f.payoffs);
  for (auto _ : st) {
    opd::kernels::serial::relax_aspirations(f.aspirations, f.payoffs, 0.05);
    benchmark::DoNotOptimize(f.aspirations.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_RelaxOmp(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  omp_set_num_threads(static_cast<int>(st.range(1)));
  opd::kernels::serial::compute_payoffs(f.grid.cells, f.lattice, f.table, f.payoffs);
  for (auto _ : st) {
    opd::kernels::omp::relax_aspirations(f.aspirations, f.payoffs, 0.05);
    benchmark::DoNotOptimize(f.aspirations.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_CountSerial(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(opd::kernels::serial::count_strategies(f.grid.cells));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_CountOmp(benchmark::State& st) {
  Fixture f(static_cast<std::size_t>(st.range(0)));
  omp_set_num_threads(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(opd::kernels::omp::count_strategies(f.grid.cells));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.dim.cell_count()));
}

void BM_Step(benchmark::State& st) {
  const auto exec = st.range(1) == 0 ? opd::Execution::Serial : opd::Execution::Parallel;
  if (st.range(1) > 0) omp_set_num_threads(static_cast<int>(st.range(1)));
  const opd::GameParams params = opd::GameParams::boundary(1.6);
  opd::Rng init(3);
  opd::LatticeState state(opd::init_random_fractions(opd::LatticeDim(st.range(0)), {}, init), 0.8, params);
  opd::Rng rng(4);
  for (auto _ : st) benchmark::DoNotOptimize(opd::step(state, params, rng, exec));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(state.strategies.size()));
}

void serial_sizes(benchmark::internal::Benchmark* b) {
  for (long side : {100, 400, 1000}) b->Args({side});
}

void omp_sizes(benchmark::internal::Benchmark* b) {
  const long max_threads = omp_get_num_procs();
  for (long side : {100, 400, 1000}) {
    for (long t = 1; t <= max_threads; t *= 2) b->Args({side, t});
    if ((max_threads & (max_threads - 1)) != 0) b->Args({side, max_threads});
  }
}

// thread count 0 selects the serial step
void step_sizes(benchmark::internal::Benchmark* b) {
  for (long side : {100, 400}) {
    b->Args({side, 0});
    b->Args({side, omp_get_num_procs()});
  }
}

}  // namespace

BENCHMARK(BM_PayoffsSerial)->Apply(serial_sizes);
BENCHMARK(BM_PayoffsOmp)->Apply(omp_sizes)->UseRealTime();
BENCHMARK(BM_RelaxSerial)->Apply(serial_sizes);
BENCHMARK(BM_RelaxOmp)->Apply(omp_sizes)->UseRealTime();
BENCHMARK(BM_CountSerial)->Apply(serial_sizes);
BENCHMARK(BM_CountOmp)->Apply(omp_sizes)->UseRealTime();
BENCHMARK(BM_Step)->Apply(step_sizes)->UseRealTime();

BENCHMARK_MAIN();
