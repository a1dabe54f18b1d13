#pragma once

#include <vector>

#include "freshx/types.hpp"

namespace freshx {

/// Principal-component reduction of a feature matrix.
struct PcaResult {
  /// Retained component scores, one column per component, named
  /// `pc-1 .. pc-r`.
  FeatureMatrix components;
  /// Explained-variance ratio of every component of the decomposition
  /// (not only the retained ones); non-increasing, sums to 1.
  std::vector<double> explained_ratio;
};

/// Reduces the matrix to the smallest set of leading principal components
/// whose explained variance reaches variance_fraction of the total.
///
/// Columns are z-scored first (constant columns are dropped), so the
/// decomposition acts on the sample correlation structure.  Eigenvalues
/// are ordered descending; each component's sign is fixed so its
/// largest-magnitude loading is positive.
///
/// Throws TooFewRows (fewer than 2 rows), EmptyAfterConstantDrop (no
/// non-constant columns), or InvalidQ when variance_fraction is outside
/// (0, 1].
PcaResult pca_reduce(const FeatureMatrix& matrix, double variance_fraction);

}  // namespace freshx
