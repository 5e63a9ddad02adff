#include <benchmark/benchmark.h>

#include <cmath>

#include "triprod/triprod.hpp"

using namespace triprod;

namespace {

const Complex I(0.0, 1.0);

void BM_log_gamma(benchmark::State& state) {
  Complex z(0.3, 17.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_gamma(z));
    z += Complex(0.0, 1e-9);
  }
}
BENCHMARK(BM_log_gamma);

void BM_closed_form(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_A(2.0 * I, 3.0 * I, 5.0 * I));
}
BENCHMARK(BM_closed_form);

void BM_triple_quadrature(benchmark::State& state) {
  QuadratureConfig cfg;
  cfg.scheme = static_cast<QuadratureScheme>(state.range(0));
  cfg.target_rel_error = 1e-6;
  const CircleFunction one = CircleFunction::constant(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(model_triple_quadrature(one, one, one, I, 2.0 * I, 4.0 * I, cfg));
}
BENCHMARK(BM_triple_quadrature)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_modal_table_element(benchmark::State& state) {
  const ModalSeriesTable table(exponents(I, 2.0 * I, 3.0 * I), 64);
  int n = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.element(n % 64, -(n % 32)));
    ++n;
  }
}
BENCHMARK(BM_modal_table_element)->Unit(benchmark::kMicrosecond);

void BM_gaussian_expect(benchmark::State& state) {
  const GaussianSpec spec{6, 1, state.range(0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_expect(spec, [](std::span<const double> x) {
      return Complex(std::abs(x[0] * x[3] - x[1] * x[2]));
    }));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_gaussian_expect)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_propAB(benchmark::State& state) {
  const GaussianSpec spec{6, 1, 100'000};
  for (auto _ : state) benchmark::DoNotOptimize(propAB_check(2.0 * I, 0.0, 0.0, spec));
}
BENCHMARK(BM_propAB)->Unit(benchmark::kMillisecond);

void BM_hmod_form(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(hmod_form(4.0 * I, I, 2.0 * I, n, n / 2, {QuadratureScheme::modal_series}));
}
BENCHMARK(BM_hmod_form)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_relative_trace(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HermitianForm h = hmod_form(4.0 * I, I, 2.0 * I, n, n / 2, {QuadratureScheme::modal_series});
  const HermitianForm q = sobolev_form(2, 4.0, I, 2.0 * I, n);
  for (auto _ : state) benchmark::DoNotOptimize(relative_trace(h, q));
}
BENCHMARK(BM_relative_trace)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_group_action(benchmark::State& state) {
  CircleFunction f(64);
  for (int j = -64; j <= 64; ++j) f.coeff_ref(j) = 1.0 / (1.0 + j * j);
  const GroupElement g = GroupElement::rotation(0.4) * GroupElement::diagonal(1.5, 1.0 / 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(group_action(g, 2.0 * I, f));
}
BENCHMARK(BM_group_action)->Unit(benchmark::kMicrosecond);

void BM_pairing(benchmark::State& state) {
  const PairingSetup setup{I, 2.0 * I, 8.0 * I, 0.0, 8.0};
  const std::array<GroupElement, 2> g{GroupElement::identity(), GroupElement::rotation(0.2)};
  for (auto _ : state) benchmark::DoNotOptimize(pairing_test(g, setup));
}
BENCHMARK(BM_pairing)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
