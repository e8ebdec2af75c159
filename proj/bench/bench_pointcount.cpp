#include <benchmark/benchmark.h>

#include <map>

#include "census/curve.hpp"
#include "census/family.hpp"

using namespace census;

namespace {

const HyperellipticCurve& curve(uint64_t q, int gamma) {
  static std::map<std::pair<uint64_t, int>, HyperellipticCurve> cache;
  auto key = std::make_pair(q, gamma);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto f = make_field_of_order(q);
    it = cache.emplace(key, HyperellipticCurve::make(f, sample_curve(f, gamma, 42, 0))).first;
  }
  return it->second;
}

// args: q, gamma, extension degree m
template <Kernel K>
void BM_CountPoints(benchmark::State& state) {
  const auto& H = curve(state.range(0), static_cast<int>(state.range(1)));
  const int m = static_cast<int>(state.range(2));
  count_points(H, m, K);  // builds tables outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(count_points(H, m, K));
  uint64_t Q = 1;
  for (int i = 0; i < m; ++i) Q *= state.range(0);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(Q));
}

void args(benchmark::internal::Benchmark* b) {
  b->Args({3, 5, 4})->Args({13, 9, 2})->Args({13, 9, 3})->Args({7, 7, 5});
}

void BM_LPolynomial(benchmark::State& state) {
  const auto& H = curve(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(l_polynomial(H));
}

void BM_Survey(benchmark::State& state) {
  SurveyConfig c;
  c.q = 13;
  c.gamma = 9;
  c.samples = 200;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(survey(c, [](const SurveyRecord&) {}).curves);
}

}  // namespace

BENCHMARK(BM_CountPoints<Kernel::kReference>)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountPoints<Kernel::kTable>)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountPoints<Kernel::kTableParallel>)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LPolynomial)->Args({13, 9})->Args({25, 9})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Survey)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
