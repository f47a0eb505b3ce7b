// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "bmshift/chains.hpp"
#include "bmshift/oracle.hpp"

using namespace bmshift;

namespace {

const ParamTuple& surd_tuple() {
  static const ParamTuple p =
      ParamTuple::make(parse_real("sqrt(2)"), parse_real("1/3"), parse_real("sqrt(7)"), parse_real("0"));
  return p;
}

const ParamTuple& integer_tuple() {
  static const ParamTuple p =
      ParamTuple::make(parse_real("2"), parse_real("1"), parse_real("4"), parse_real("0"));
  return p;
}

template <auto Kernel>
void classify_range(benchmark::State& state) {
  const auto& p = surd_tuple();
  const std::int64_t n = state.range(0);
  const std::int64_t horizon = default_horizon(p, n);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p, 1, n, horizon));
  state.SetItemsProcessed(state.iterations() * n);
}

void empirical(benchmark::State& state, bool parallel) {
  EmpiricalOptions o;
  o.parallel = parallel;
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_densities(surd_tuple(), n, o));
  state.SetItemsProcessed(state.iterations() * n);
}

template <auto Kernel>
void count(benchmark::State& state) {
  const auto A = BinaryMatrix::parse("1100;0110;0011;1001");
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(integer_tuple(), A, n));
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(classify_range<classify_range_serial>)->Name("classify_range/serial")->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(classify_range<classify_range_parallel>)->Name("classify_range/openmp")->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(empirical, serial, false)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(empirical, openmp, true)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(count<count_patterns_serial>)->Name("count_patterns/serial")->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(count<count_patterns>)->Name("count_patterns/openmp")->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
