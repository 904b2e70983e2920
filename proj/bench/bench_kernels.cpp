// Serial reference against OpenMP for the parallel kernels: sector Monte
// Carlo and homotopy path tracking. Both variants must agree bit for bit.
#include "euler/critpoints.hpp"
#include "euler/integrate.hpp"
#include "euler/laurent.hpp"

#include <benchmark/benchmark.h>

#include <stdexcept>

namespace {

using namespace euler;

IntegralSpec pentagon() {
  IntegralSpec s;
  s.vars = {"x1", "x2"};
  s.polys = {parse("1+x1", s.vars), parse("1+x1+x2", s.vars), parse("x1+x2", s.vars)};
  s.s = {Rational(1), Rational(1), Rational(1)};
  s.nu = {Rational(1), Rational(1)};
  return s;
}

IntegralSpec m06() {
  IntegralSpec s;
  s.vars = default_vars(3);
  s.polys = moduli_minors(6);
  for (size_t i = 0; i < s.polys.size(); ++i) s.s.push_back(Rational(3 + static_cast<long>(i), 7));
  s.nu = {Rational(2, 3), Rational(3, 5), Rational(4, 7)};
  return s;
}

void BM_MonteCarlo(benchmark::State& state) {
  auto spec = pentagon();
  McOptions opt;
  opt.samples = state.range(0);
  opt.seed = 7;
  opt.parallel = state.range(1) != 0;
  McOptions other = opt;
  other.parallel = !opt.parallel;
  if (evaluate(spec, opt).estimate != evaluate(spec, other).estimate)
    throw std::logic_error("serial and parallel Monte Carlo disagree");
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec, opt).estimate);
  state.SetItemsProcessed(state.iterations() * opt.samples);
  state.SetLabel(opt.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_MonteCarlo)->Args({200000, 0})->Args({200000, 1})->Unit(benchmark::kMillisecond);

void BM_CriticalPoints(benchmark::State& state) {
  auto spec = m06();
  SolveOptions opt;
  opt.parallel = state.range(0) != 0;
  size_t count = 0;
  for (auto _ : state) count = all_critical_points(spec, 3, opt).count();
  state.counters["points"] = static_cast<double>(count);
  state.SetLabel(opt.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_CriticalPoints)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
