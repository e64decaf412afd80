#include <benchmark/benchmark.h>

#include "sectional/bundle.hpp"
#include "sectional/catalog.hpp"

using namespace sectional;

namespace {

  SemigroupoidTables const& pair_tables(std::size_t n) {
    static std::map<std::size_t, SemigroupoidTables> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
      it = cache.emplace(n, catalog::pair_groupoid(n).tables()).first;
    }
    return it->second;
  }

  std::vector<std::uint32_t> table(std::size_t n) {
    return pair_tables(n).prod;
  }

  void semigroupoid_associativity(benchmark::State& state, ExecPolicy policy) {
    std::size_t const          v = static_cast<std::size_t>(state.range(0));
    std::vector<std::uint32_t> prod = table(v);
    std::size_t const          n    = v * v;
    for (auto _ : state) {
      benchmark::DoNotOptimize(kernels::associativity_failure(n, prod, policy));
    }
  }

  void sectional_tabulation(benchmark::State& state, ExecPolicy policy) {
    std::size_t const v = static_cast<std::size_t>(state.range(0));
    Bundle const      b = Bundle::trivial(Ring::rationals(), share(catalog::pair_groupoid(v)));
    for (auto _ : state) {
      benchmark::DoNotOptimize(sectional_constants(b, policy));
    }
  }

  void algebra_associativity(benchmark::State& state, ExecPolicy policy) {
    std::size_t const v = static_cast<std::size_t>(state.range(0));
    Bundle const      b = Bundle::trivial(Ring::integers_mod(7), share(catalog::pair_groupoid(v)));
    StructureConstants const sc = sectional_constants(b, ExecPolicy::serial);
    for (auto _ : state) {
      benchmark::DoNotOptimize(kernels::algebra_associativity_failure(b.ring(), sc, policy));
    }
  }

}  // namespace

BENCHMARK_CAPTURE(semigroupoid_associativity, serial, ExecPolicy::serial)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK_CAPTURE(semigroupoid_associativity, openmp, ExecPolicy::parallel)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK_CAPTURE(sectional_tabulation, serial, ExecPolicy::serial)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(sectional_tabulation, openmp, ExecPolicy::parallel)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(algebra_associativity, serial, ExecPolicy::serial)->Arg(3)->Arg(5);
BENCHMARK_CAPTURE(algebra_associativity, openmp, ExecPolicy::parallel)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
