#include "freshx/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freshx/features.hpp"
#include "freshx/pca.hpp"
#include "freshx/selection.hpp"
#include "parallel.hpp"

namespace freshx {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Half-open ranges of consecutive registry entries sharing a mapping
/// name; each range is one extraction task per (entity, kind).
std::vector<std::pair<std::size_t, std::size_t>> family_runs(
    std::span<const MappingSpec> registry) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= registry.size(); ++i) {
    if (i == registry.size() || registry[i].name != registry[start].name) {
      runs.emplace_back(start, i);
      start = i;
    }
  }
  return runs;
}

}  // namespace

FeatureMatrix extract_all(const Dataset& dataset,
                          std::span<const MappingSpec> registry,
                          std::size_t worker_count) {
  std::size_t entities = dataset.entity_count();
  std::size_t kinds = dataset.kind_count();
  std::size_t per_kind = registry.size();

  FeatureMatrix matrix;
  matrix.entity_order = dataset.entity_order;
  matrix.columns.resize(kinds * per_kind + dataset.meta_names.size());

  for (std::size_t k = 0; k < kinds; ++k) {
    std::size_t n_t = dataset.series[k].empty() ? 0
                                                : dataset.series[k][0].size();
    for (std::size_t s = 0; s < per_kind; ++s) {
      auto& col = matrix.columns[k * per_kind + s];
      col.id = make_column_id(dataset.kind_order[k], registry[s], n_t);
      col.values.assign(entities, 0.0);
    }
  }
  for (std::size_t a = 0; a < dataset.meta_names.size(); ++a) {
    auto& col = matrix.columns[kinds * per_kind + a];
    col.id.kind = dataset.meta_names[a];
    col.id.mapping = "meta";
    col.values = dataset.meta[a];
  }

  auto runs = family_runs(registry);
  std::size_t tasks = entities * kinds * runs.size();
  parallel_for(tasks, worker_count, [&](std::size_t t) {
    std::size_t e = t % entities;
    std::size_t k = (t / entities) % kinds;
    std::size_t r = t / (entities * kinds);
    auto [lo, hi] = runs[r];
    std::vector<double> out(hi - lo, kNaN);
    try {
      extract_family(registry.subspan(lo, hi - lo), dataset.series[k][e],
                     out);
    } catch (...) {
      std::fill(out.begin(), out.end(), kNaN);
    }
    for (std::size_t s = lo; s < hi; ++s)
      matrix.columns[k * per_kind + s].values[e] = out[s - lo];
  });

  for (auto& col : matrix.columns) {
    for (double& v : col.values) {
      if (!std::isfinite(v)) {
        v = 0.0;
        col.flagged = true;
      }
    }
    col.codomain = classify_codomain(col.values);
  }
  return matrix;
}

namespace {

FeatureMatrix filter_relevant(const FeatureMatrix& matrix,
                              const RelevanceTable& table) {
  FeatureMatrix out;
  out.entity_order = matrix.entity_order;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c)
    if (table.rows[c].relevant) out.columns.push_back(matrix.columns[c]);
  return out;
}

std::vector<MappingSpec> effective_registry(const SelectionConfig& config) {
  return config.registry ? *config.registry : default_registry();
}

}  // namespace

FreshResult run_fresh(const Dataset& dataset, const TargetVector& target,
                      const SelectionConfig& config) {
  FreshResult result;
  FeatureMatrix matrix =
      extract_all(dataset, effective_registry(config), config.worker_count);
  result.table = build_relevance_table(matrix, target, config);
  result.matrix = filter_relevant(matrix, result.table);
  return result;
}

FreshResult run_fresh_pca_before(const Dataset& dataset,
                                 const TargetVector& target,
                                 const SelectionConfig& config) {
  FreshResult result;
  FeatureMatrix matrix =
      extract_all(dataset, effective_registry(config), config.worker_count);
  PcaResult pca = pca_reduce(matrix, config.variance_fraction);
  result.table = build_relevance_table(pca.components, target, config);
  result.matrix = filter_relevant(pca.components, result.table);
  return result;
}

FreshResult run_fresh_pca_after(const Dataset& dataset,
                                const TargetVector& target,
                                const SelectionConfig& config) {
  FreshResult result = run_fresh(dataset, target, config);
  if (result.matrix.columns.empty()) {
    result.warnings.push_back(
        "no relevant features survived selection; skipping "
        "principal-component reduction");
    return result;
  }
  PcaResult pca = pca_reduce(result.matrix, config.variance_fraction);
  result.matrix = std::move(pca.components);
  return result;
}

FreshResult run_pipeline(const Dataset& dataset, const TargetVector& target,
                         const SelectionConfig& config) {
  switch (config.pca) {
    case PcaPlacement::Before:
      return run_fresh_pca_before(dataset, target, config);
    case PcaPlacement::After:
      return run_fresh_pca_after(dataset, target, config);
    case PcaPlacement::None:
      break;
  }
  return run_fresh(dataset, target, config);
}

}  // namespace freshx
