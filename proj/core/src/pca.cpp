#include "freshx/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace freshx {

PcaResult pca_reduce(const FeatureMatrix& matrix, double variance_fraction) {
  if (!(variance_fraction > 0.0) || variance_fraction > 1.0 ||
      !std::isfinite(variance_fraction))
    throw DataError(ErrorCode::InvalidQ,
                    "variance fraction must lie in (0, 1]");
  std::size_t m = matrix.row_count();
  if (m < 2)
    throw DataError(ErrorCode::TooFewRows,
                    "principal-component reduction needs at least 2 rows");

  std::vector<const FeatureColumn*> kept;
  for (const auto& col : matrix.columns) {
    bool constant = true;
    for (double v : col.values)
      if (v != col.values.front()) {
        constant = false;
        break;
      }
    if (!constant) kept.push_back(&col);
  }
  if (kept.empty())
    throw DataError(ErrorCode::EmptyAfterConstantDrop,
                    "no non-constant columns to decompose");

  std::size_t n = kept.size();
  double md = static_cast<double>(m);
  Eigen::MatrixXd scaled(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& values = kept[j]->values;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= md;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (md - 1.0));
    for (std::size_t i = 0; i < m; ++i)
      scaled(i, j) = (values[i] - mean) / sd;
  }

  Eigen::MatrixXd normalized = scaled / std::sqrt(md - 1.0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      normalized, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sigma = svd.singularValues();
  std::size_t count = static_cast<std::size_t>(sigma.size());

  std::vector<double> eigenvalues(count);
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    eigenvalues[i] = sigma(i) * sigma(i);
    total += eigenvalues[i];
  }

  std::size_t rank = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (sigma(i) > sigma(0) * 1e-12) rank = i + 1;

  // The relative slack keeps a fraction landing exactly on a cumulative
  // boundary (such as 0.9 of a 2-column decomposition with correlation
  // 0.8) from spilling into the next component through rounding noise.
  double needed = variance_fraction * total * (1.0 - 1e-12);
  double cumulative = 0.0;
  std::size_t retained = count;
  for (std::size_t i = 0; i < count; ++i) {
    cumulative += eigenvalues[i];
    if (cumulative >= needed) {
      retained = i + 1;
      break;
    }
  }
  retained = std::min(retained, rank);

  PcaResult result;
  result.explained_ratio.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    result.explained_ratio[i] = eigenvalues[i] / total;

  result.components.entity_order = matrix.entity_order;
  result.components.columns.reserve(retained);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (std::size_t j = 0; j < retained; ++j) {
    Eigen::VectorXd axis = v.col(j);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(axis(i)) > std::abs(axis(peak))) peak = i;
    if (axis(peak) < 0.0) axis = -axis;

    Eigen::VectorXd scores = scaled * axis;
    FeatureColumn col;
    col.id.mapping = "pc-" + std::to_string(j + 1);
    col.values.assign(scores.data(), scores.data() + m);
    col.codomain = classify_codomain(col.values);
    result.components.columns.push_back(std::move(col));
  }
  return result;
}

}  // namespace freshx
