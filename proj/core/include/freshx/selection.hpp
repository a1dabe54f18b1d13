#pragma once

#include <span>
#include <vector>

#include "freshx/types.hpp"

namespace freshx {

/// Benjamini-Yekutieli step-up selection over a vector of p-values at
/// false discovery level q.  Returns a rejection mask aligned with the
/// input order.
///
/// The p-values are ranked ascending and compared against the threshold
/// line r_k = k*q / (n*c_k).  In Global mode c_k is the full harmonic sum
/// over all n hypotheses; in PaperLiteral mode it is the partial harmonic
/// sum up to rank k.  The largest rank whose p-value sits on or below the
/// line is accepted together with every smaller rank.
///
/// Throws InvalidQ when q is outside (0, 1] and InvalidP when any
/// p-value is outside [0, 1] or not finite.
std::vector<char> benjamini_yekutieli(std::span<const double> p_values,
                                      double q, ByMode mode = ByMode::Global);

/// Tests every matrix column against the target and applies the
/// Benjamini-Yekutieli procedure to the resulting p-values.  Constant
/// (untestable) columns are recorded with test = None, an unset p-value
/// and relevant = false; they do not enter the correction.  Column tests
/// run in parallel on config.worker_count threads.
RelevanceTable build_relevance_table(const FeatureMatrix& matrix,
                                     const TargetVector& target,
                                     const SelectionConfig& config);

}  // namespace freshx
