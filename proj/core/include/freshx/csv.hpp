#pragma once

#include <span>
#include <string>

#include "freshx/types.hpp"

namespace freshx {

struct CsvOptions {
  char delimiter = ',';
};

/// Logical column names for the long interchange format.
struct LongSchema {
  std::string id = "id";
  std::string time = "time";
  std::string kind = "kind";
  std::string value = "value";
};

/// Reads rows of (id, time, kind, value), groups them by (id, kind) and
/// sorts each group by time.  Entity and kind order follow first appearance
/// in the file.  Every entity must carry every kind at a kind-uniform
/// length; violations raise DataError with row context.
Dataset read_long_format(const std::string& path, const LongSchema& schema = {},
                         const CsvOptions& opts = {});

/// Reads the wide layout: header id,time,<kind>...; one row per (entity,
/// time step).  All kinds share the per-entity length.
Dataset read_wide_format(const std::string& path, const CsvOptions& opts = {});

/// Reads (id, target) rows and aligns them to entity_order.  Every entity
/// must appear exactly once; a constant target is rejected.
TargetVector read_targets(const std::string& path,
                          std::span<const std::string> entity_order,
                          const CsvOptions& opts = {});

/// Reads id + attribute columns and merges them into the dataset's meta
/// block.  Every dataset entity must appear exactly once.
void read_meta(const std::string& path, Dataset& dataset,
               const CsvOptions& opts = {});

/// Writes header id,<column name>... and one row per entity.  Values carry
/// 17 significant digits so a read back reproduces the exact doubles.
void write_feature_matrix(const FeatureMatrix& matrix, const std::string& path,
                          const CsvOptions& opts = {});

/// Reads a matrix written by write_feature_matrix; column identities are
/// recovered from the header tokens and codomains are reclassified.
FeatureMatrix read_feature_matrix(const std::string& path,
                                  const CsvOptions& opts = {});

/// Writes feature,p_value,test,relevant rows; untestable columns carry an
/// empty p_value field.
void write_relevance_table(const RelevanceTable& table, const std::string& path,
                           const CsvOptions& opts = {});

}  // namespace freshx
