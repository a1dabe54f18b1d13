#pragma once

#include <span>
#include <string>
#include <vector>

#include "freshx/types.hpp"

namespace freshx {

/// Output of an end-to-end pipeline run: the surviving feature matrix
/// (relevant columns, or principal components for the PCA variants), the
/// relevance table behind it, and any non-fatal warnings.
struct FreshResult {
  FeatureMatrix matrix;
  RelevanceTable table;
  std::vector<std::string> warnings;
};

/// Evaluates the registry against every (entity, kind) series and returns
/// the full feature matrix: kinds in dataset order, registry order within
/// each kind, meta-attribute columns last.  Columns whose mapping is
/// undefined on a series (or fails outright) carry zeros and are flagged.
/// Work is distributed over worker_count threads; the result is
/// bit-identical for any worker count.
FeatureMatrix extract_all(const Dataset& dataset,
                          std::span<const MappingSpec> registry,
                          std::size_t worker_count);

/// Extraction, per-column significance tests, and Benjamini-Yekutieli
/// selection.  The returned matrix holds exactly the relevant columns in
/// their original order.
FreshResult run_fresh(const Dataset& dataset, const TargetVector& target,
                      const SelectionConfig& config);

/// Variant that reduces the extracted matrix to principal components
/// first and runs the tests on the component scores.
FreshResult run_fresh_pca_before(const Dataset& dataset,
                                 const TargetVector& target,
                                 const SelectionConfig& config);

/// Variant that runs plain selection first and reduces the surviving
/// columns to principal components.  When nothing survives, the result
/// carries an empty matrix and a warning instead of failing.
FreshResult run_fresh_pca_after(const Dataset& dataset,
                                const TargetVector& target,
                                const SelectionConfig& config);

/// Dispatches on config.pca to one of the three pipelines above.
FreshResult run_pipeline(const Dataset& dataset, const TargetVector& target,
                         const SelectionConfig& config);

}  // namespace freshx
