#include <benchmark/benchmark.h>

#include <vector>

#include "freshx/features.hpp"
#include "freshx/pipeline.hpp"
#include "freshx/rng.hpp"
#include "freshx/selection.hpp"
#include "freshx/stat_tests.hpp"
#include "freshx/synth.hpp"

using namespace freshx;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto& v : s) v = rng.normal();
  return s;
}

void bm_mapping(benchmark::State& state, const char* name,
                std::vector<std::pair<std::string, ParamValue>> params) {
  MappingSpec spec{name, std::move(params)};
  auto s = random_series(static_cast<std::size_t>(state.range(0)), 0xbe1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_feature(spec, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_mean(benchmark::State& state) { bm_mapping(state, "mean", {}); }
void bm_fft(benchmark::State& state) {
  bm_mapping(state, "fast_fourier_transformation_coefficient",
             {{"k", ParamValue{4.0, false}}});
}
void bm_cwt(benchmark::State& state) {
  bm_mapping(state, "continuous_wavelet_transformation_coefficients",
             {{"a", ParamValue{10.0, false}}, {"b", ParamValue{0.0, true}}});
}
void bm_adf(benchmark::State& state) {
  bm_mapping(state, "augmented_dickey_fuller_test_statistic", {});
}
void bm_welch(benchmark::State& state) {
  bm_mapping(state, "spektral_welch_density", {{"i", ParamValue{5.0, false}}});
}
void bm_autocorr(benchmark::State& state) {
  bm_mapping(state, "mean_autocorrelation", {});
}

void bm_kendall(benchmark::State& state) {
  auto x = random_series(static_cast<std::size_t>(state.range(0)), 0xbe2);
  auto y = random_series(static_cast<std::size_t>(state.range(0)), 0xbe3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kendall_rank(x, y).p_value);
  }
}

void bm_ks(benchmark::State& state) {
  auto a = random_series(static_cast<std::size_t>(state.range(0)), 0xbe4);
  auto b = random_series(static_cast<std::size_t>(state.range(0)), 0xbe5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks_two_sample(a, b).p_value);
  }
}

void bm_fisher(benchmark::State& state) {
  Rng rng(0xbe6);
  std::size_t m = static_cast<std::size_t>(state.range(0));
  std::vector<double> x(m), y(m);
  do {
    for (auto& v : x) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
  } while (classify_codomain(x) != Codomain::Binary);
  do {
    for (auto& v : y) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
  } while (classify_codomain(y) != Codomain::Binary);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher_exact(x, y).p_value);
  }
}

void bm_by_selection(benchmark::State& state) {
  Rng rng(0xbe7);
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  for (auto& v : p) v = rng.uniform();
  for (auto _ : state) {
    benchmark::DoNotOptimize(benjamini_yekutieli(p, 0.1, ByMode::Global));
  }
}

void bm_extract_all(benchmark::State& state) {
  TwoClass data = gen_two_class(32, static_cast<std::size_t>(state.range(0)),
                                0.0, 0xbe8);
  auto registry = default_registry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_all(data.dataset, registry, 1));
  }
}

void bm_full_pipeline(benchmark::State& state) {
  TwoClass data = gen_two_class(static_cast<std::size_t>(state.range(0)), 64,
                                1.0, 0xbe9);
  SelectionConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_fresh(data.dataset, data.target, config));
  }
}

}  // namespace

BENCHMARK(bm_mean)->Arg(256)->Arg(4096);
BENCHMARK(bm_fft)->Arg(256)->Arg(4096);
BENCHMARK(bm_cwt)->Arg(256)->Arg(4096);
BENCHMARK(bm_adf)->Arg(256)->Arg(4096);
BENCHMARK(bm_welch)->Arg(256)->Arg(4096);
BENCHMARK(bm_autocorr)->Arg(256)->Arg(4096);
BENCHMARK(bm_kendall)->Arg(100)->Arg(1000);
BENCHMARK(bm_ks)->Arg(100)->Arg(1000);
BENCHMARK(bm_fisher)->Arg(100)->Arg(1000);
BENCHMARK(bm_by_selection)->Arg(1000)->Arg(100000);
BENCHMARK(bm_extract_all)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_full_pipeline)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
