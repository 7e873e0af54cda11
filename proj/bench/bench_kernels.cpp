// Serial reference path against the OpenMP path for the parallel kernels.
// Arg 0 is Exec::serial, Arg 1 is Exec::parallel.
#include <benchmark/benchmark.h>

#include <cmath>

#include "hyper/opcalc.hpp"
#include "hyper/slode.hpp"
#include "hyper/transforms.hpp"

using namespace hyper;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel x" + std::to_string(max_threads()) : "serial"); }

void BM_forward(benchmark::State& state) {
  const auto H = make_instance("mehler_fock");
  const TransformInput f{[](double x) { return cplx(std::pow(std::cosh(0.5 * x), -3)); }, "sech^3(x/2)"};
  std::vector<cplx> ls;
  for (int k = 1; k <= 32; ++k) ls.push_back(0.125 * k);
  ForwardOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(forward(H, f, ls, opt));
  label(state);
}
BENCHMARK(BM_forward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_convolve(benchmark::State& state) {
  const auto H = make_instance("jacobi_sl2c");
  const Grid grid = Grid::composite(H, 0.0, 4.0, 16, 12);
  const auto F = GridFunction::sample(grid, [](double x) { return cplx(battery_bump(x, 0.0, 1.5)); });
  const auto G = GridFunction::sample(grid, [](double x) { return cplx(std::exp(-x * x)); });
  for (auto _ : state) benchmark::DoNotOptimize(convolve(H, F, G, exec_of(state)));
  label(state);
}
BENCHMARK(BM_convolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_lambda_op(benchmark::State& state) {
  const auto H = make_instance("jacobi_sl2c");
  const Grid grid = Grid::composite(H, 0.0, 12.0, 24, 8);
  auto f = [](double x) { return cplx(battery_bump(x, 0.0, 1.0)); };
  for (auto _ : state) benchmark::DoNotOptimize(lambda_op(H, f, grid, exec_of(state)));
  label(state);
}
BENCHMARK(BM_lambda_op)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_homomorphism_battery(benchmark::State& state) {
  const auto H = make_instance("jacobi_sl2c");
  BatteryOptions opt;
  opt.trials = 4;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(homomorphism_battery(H, opt));
  label(state);
}
BENCHMARK(BM_homomorphism_battery)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_multiplicativity(benchmark::State& state) {
  const auto H = make_instance("mehler_fock");
  for (auto _ : state) benchmark::DoNotOptimize(check_multiplicativity(H, 100, 7, 0.95, 4.0, exec_of(state)));
  label(state);
}
BENCHMARK(BM_multiplicativity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_solve_characters(benchmark::State& state) {
  const auto w = builtin_weight("mehler");
  std::vector<cplx> ls;
  for (int k = 0; k < 16; ++k) ls.push_back(0.25 * k);
  for (auto _ : state) benchmark::DoNotOptimize(solve_characters(w, ls, 10.0, {}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_solve_characters)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_mellin_battery(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mellin_calculus_battery(8, 3, 77, exec_of(state)));
  label(state);
}
BENCHMARK(BM_mellin_battery)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
