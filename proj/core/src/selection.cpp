#include "freshx/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "freshx/stat_tests.hpp"
#include "parallel.hpp"

namespace freshx {

std::vector<char> benjamini_yekutieli(std::span<const double> p_values,
                                      double q, ByMode mode) {
  if (!(q > 0.0) || q > 1.0 || !std::isfinite(q))
    throw DataError(ErrorCode::InvalidQ,
                    "fdr level must lie in (0, 1]");
  for (double p : p_values)
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
      throw DataError(ErrorCode::InvalidP, "p-values must lie in [0, 1]");

  std::size_t n = p_values.size();
  std::vector<char> mask(n, 0);
  if (n == 0) return mask;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return p_values[l] < p_values[r];
  });

  std::vector<double> harmonic(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k)
    harmonic[k] = harmonic[k - 1] + 1.0 / static_cast<double>(k);

  double nd = static_cast<double>(n);
  auto threshold = [&](std::size_t rank) {
    double c = mode == ByMode::Global ? harmonic[n] : harmonic[rank];
    return static_cast<double>(rank) * q / (nd * c);
  };

  std::size_t accepted = 0;
  for (std::size_t rank = n; rank >= 1; --rank) {
    if (p_values[order[rank - 1]] <= threshold(rank)) {
      accepted = rank;
      break;
    }
  }
  for (std::size_t rank = 1; rank <= accepted; ++rank)
    mask[order[rank - 1]] = 1;
  return mask;
}

RelevanceTable build_relevance_table(const FeatureMatrix& matrix,
                                     const TargetVector& target,
                                     const SelectionConfig& config) {
  std::size_t columns = matrix.columns.size();
  RelevanceTable table;
  table.rows.resize(columns);

  std::vector<std::optional<TestOutcome>> outcomes(columns);
  parallel_for(columns, config.worker_count, [&](std::size_t c) {
    outcomes[c] = dispatch_test(matrix.columns[c], target);
  });

  std::vector<double> p_values;
  std::vector<std::size_t> tested;
  p_values.reserve(columns);
  tested.reserve(columns);
  for (std::size_t c = 0; c < columns; ++c) {
    auto& row = table.rows[c];
    row.feature = matrix.columns[c].id.name();
    if (outcomes[c]) {
      row.p_value = outcomes[c]->p_value;
      row.test = outcomes[c]->test;
      p_values.push_back(outcomes[c]->p_value);
      tested.push_back(c);
    } else {
      row.p_value = std::numeric_limits<double>::quiet_NaN();
      row.test = TestKind::None;
      row.relevant = false;
    }
  }

  std::vector<char> mask =
      benjamini_yekutieli(p_values, config.q, config.by_mode);
  for (std::size_t i = 0; i < tested.size(); ++i)
    table.rows[tested[i]].relevant = mask[i] != 0;
  return table;
}

}  // namespace freshx
