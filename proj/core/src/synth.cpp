#include "freshx/synth.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <utility>

#include "freshx/features.hpp"
#include "freshx/pipeline.hpp"
#include "freshx/rng.hpp"
#include "freshx/selection.hpp"

namespace freshx {
namespace {

std::string entity_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "e%06zu", index);
  return buf;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  auto delta = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double>(delta).count();
}

/// Random binary target of length m, redrawn until both classes appear.
TargetVector random_binary_target(std::size_t m, Rng& rng) {
  TargetVector target;
  target.codomain = Codomain::Binary;
  target.values.resize(m);
  while (true) {
    for (double& v : target.values) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    if (classify_codomain(target.values) == Codomain::Binary) return target;
  }
}

}  // namespace

TwoClass gen_two_class(std::size_t m, std::size_t n_t, double effect,
                       std::uint64_t seed) {
  if (m == 0 || m % 2 != 0)
    throw DataError(ErrorCode::InvalidSize,
                    "entity count must be positive and even");
  if (n_t < 8)
    throw DataError(ErrorCode::InvalidSize, "series length must be at least 8");
  if (!(effect >= 0.0))
    throw DataError(ErrorCode::InvalidSize, "effect size must be non-negative");

  TwoClass out;
  Dataset& ds = out.dataset;
  ds.kind_order = {"signal", "noise"};
  ds.series.resize(2);
  ds.series[0].resize(m);
  ds.series[1].resize(m);
  ds.entity_order.reserve(m);

  Rng rng(seed);
  out.target.codomain = Codomain::Binary;
  out.target.values.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    ds.entity_order.push_back(entity_name(e));
    bool shifted = e >= m / 2;
    out.target.values[e] = shifted ? 1.0 : 0.0;

    auto& signal = ds.series[0][e];
    signal.resize(n_t);
    double prev = 0.0;
    for (std::size_t t = 0; t < n_t; ++t) {
      prev = 0.5 * prev + rng.normal();
      signal[t] = prev + (shifted ? effect : 0.0);
    }

    auto& noise = ds.series[1][e];
    noise.resize(n_t);
    for (std::size_t t = 0; t < n_t; ++t) noise[t] = rng.normal();
  }
  return out;
}

Dataset gen_noise_dataset(std::size_t m, std::size_t n_t, std::size_t kinds,
                          std::uint64_t seed) {
  if (m == 0 || n_t == 0 || kinds == 0)
    throw DataError(ErrorCode::InvalidSize,
                    "noise dataset dimensions must be positive");
  Dataset ds;
  ds.series.resize(kinds);
  for (std::size_t k = 0; k < kinds; ++k) {
    ds.kind_order.push_back("k" + std::to_string(k));
    ds.series[k].resize(m);
  }
  ds.entity_order.reserve(m);
  Rng rng(seed);
  for (std::size_t e = 0; e < m; ++e) {
    ds.entity_order.push_back(entity_name(e));
    for (std::size_t k = 0; k < kinds; ++k) {
      auto& series = ds.series[k][e];
      series.resize(n_t);
      for (double& v : series) v = rng.normal();
    }
  }
  return ds;
}

double fer_experiment(std::size_t n_features, std::size_t m, double q,
                      std::size_t repetitions, std::uint64_t seed) {
  if (n_features == 0 || m == 0 || repetitions == 0)
    throw DataError(ErrorCode::InvalidSize,
                    "experiment dimensions must be positive");

  Rng rng(seed);
  SelectionConfig config;
  config.q = q;

  double total = 0.0;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    TargetVector target = random_binary_target(m, rng);
    FeatureMatrix matrix;
    matrix.entity_order.reserve(m);
    for (std::size_t e = 0; e < m; ++e)
      matrix.entity_order.push_back(entity_name(e));
    matrix.columns.resize(n_features);
    for (std::size_t c = 0; c < n_features; ++c) {
      auto& col = matrix.columns[c];
      col.id.mapping = "noise-" + std::to_string(c);
      col.values.resize(m);
      for (double& v : col.values) v = rng.normal();
      col.codomain = classify_codomain(col.values);
    }

    RelevanceTable table = build_relevance_table(matrix, target, config);
    std::size_t selected = 0;
    for (const auto& row : table.rows) selected += row.relevant;
    // every feature is noise, so any selection is a false one
    total += selected > 0 ? 1.0 : 0.0;
  }
  return total / static_cast<double>(repetitions);
}

std::vector<ScalingRow> scaling_experiment(ScaleAxis axis,
                                           std::span<const std::size_t> grid,
                                           std::size_t jobs) {
  std::vector<ScalingRow> rows;
  rows.reserve(grid.size());
  auto registry = default_registry();

  for (std::size_t value : grid) {
    switch (axis) {
      case ScaleAxis::Length: {
        TwoClass data = gen_two_class(200, value, 0.0, 0x5ca11u);
        auto start = std::chrono::steady_clock::now();
        extract_all(data.dataset, registry, jobs);
        rows.push_back({value, elapsed_seconds(start)});
        break;
      }
      case ScaleAxis::Samples: {
        TwoClass data = gen_two_class(value, 1000, 0.0, 0x5ca12u);
        auto start = std::chrono::steady_clock::now();
        extract_all(data.dataset, registry, jobs);
        rows.push_back({value, elapsed_seconds(start)});
        break;
      }
      case ScaleAxis::Features: {
        std::size_t m = 1000;
        Rng rng(0x5ca13u ^ value);
        FeatureMatrix matrix;
        matrix.entity_order.reserve(m);
        for (std::size_t e = 0; e < m; ++e)
          matrix.entity_order.push_back(entity_name(e));
        matrix.columns.resize(value);
        for (std::size_t c = 0; c < value; ++c) {
          auto& col = matrix.columns[c];
          col.id.mapping = "noise-" + std::to_string(c);
          col.values.resize(m);
          for (double& v : col.values) v = rng.normal();
          col.codomain = classify_codomain(col.values);
        }
        TargetVector target;
        target.codomain = Codomain::Continuous;
        target.values.resize(m);
        for (double& v : target.values) v = rng.normal();

        SelectionConfig config;
        config.worker_count = jobs;
        auto start = std::chrono::steady_clock::now();
        build_relevance_table(matrix, target, config);
        rows.push_back({value, elapsed_seconds(start)});
        break;
      }
    }
  }
  return rows;
}

}  // namespace freshx
