// Serial reference vs OpenMP enumeration on the same equations.
#include <benchmark/benchmark.h>

#include "decor/model.hpp"
#include "decor/states.hpp"

using namespace decor;

namespace {

// Locations x, y, z with |V| = n each; the commutation law of x and y is
// checked over n^2 inputs and n^3 states.
struct Fixture {
  Theory th;
  FiniteModel m;
  Equation eq;
  explicit Fixture(int n) {
    th = build_states_theory({"x", "y", "z"});
    m = make_model(th, {n, n, n});
    eq = st::commutation6(th, "x", "y");
  }
};

void BM_Serial(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_equation_serial(f.m, f.eq));
  state.counters["points"] = static_cast<double>(point_count(f.m, f.eq));
}

void BM_Parallel(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_equation(f.m, f.eq));
  state.counters["points"] = static_cast<double>(point_count(f.m, f.eq));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
