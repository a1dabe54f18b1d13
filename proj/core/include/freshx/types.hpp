#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freshx {

/// Codomain of a finite real sequence, decided by exact distinct-value count:
/// 1 distinct value -> Constant, 2 -> Binary, otherwise Continuous.
enum class Codomain { Constant, Binary, Continuous };

Codomain classify_codomain(std::span<const double> values);

/// Error category attached to DataError so callers can map failures to
/// process exit codes without parsing messages.
enum class ErrorCode {
  MissingColumn,
  UnparsableValue,
  RaggedKind,
  DuplicateTimestamp,
  MissingEntity,
  DuplicateEntity,
  ConstantTarget,
  LengthMismatch,
  EmptySample,
  ConstantInput,
  InvalidQ,
  InvalidP,
  TooFewRows,
  EmptyAfterConstantDrop,
  InvalidSize,
  BadName,
  Io,
};

class DataError : public std::runtime_error {
 public:
  DataError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// One uniformly sampled series recorded for one (entity, kind) pair.
/// Indices are the time axis; the sampling interval is not stored.
struct TimeSeriesSample {
  std::string entity_id;
  std::string kind;
  std::vector<double> values;
};

/// A collection of m entities, each carrying one series per kind plus
/// optional static meta attributes.  For a fixed kind every entity has a
/// series of identical length; ingest rejects violations.
struct Dataset {
  std::vector<std::string> entity_order;  ///< canonical row order (first appearance)
  std::vector<std::string> kind_order;    ///< kinds in first-appearance order
  /// series[k][e] holds the values of kind_order[k] for entity_order[e].
  std::vector<std::vector<std::vector<double>>> series;
  std::vector<std::string> meta_names;
  /// meta[a][e] holds attribute meta_names[a] for entity_order[e].
  std::vector<std::vector<double>> meta;

  std::size_t entity_count() const { return entity_order.size(); }
  std::size_t kind_count() const { return kind_order.size(); }
};

/// Regression or classification target, aligned to Dataset::entity_order.
/// Constant targets are rejected at construction.
struct TargetVector {
  std::vector<double> values;
  Codomain codomain = Codomain::Continuous;
};

/// Parameter value for a feature mapping.  half_length is a late binding
/// resolved to floor(n_t / 2) once the series length is known.
struct ParamValue {
  double value = 0.0;
  bool half_length = false;

  friend bool operator==(const ParamValue&, const ParamValue&) = default;
};

/// One registry entry: a mapping name with a concrete parameter binding.
/// The default registry expands parameter grids into one spec per column.
struct MappingSpec {
  std::string name;
  std::vector<std::pair<std::string, ParamValue>> params;
};

/// Structured identity of one feature-matrix column.  Meta attributes use
/// mapping "meta" with the attribute name in the kind slot.  Principal
/// components use an empty kind and mapping "pc-<r>".
struct ColumnId {
  std::string kind;
  std::string mapping;
  std::vector<std::pair<std::string, double>> params;  ///< resolved bindings

  /// Serialized header token: kind__mapping[__name-value...].
  std::string name() const;
};

struct FeatureColumn {
  ColumnId id;
  std::vector<double> values;
  Codomain codomain = Codomain::Continuous;
  /// True when non-finite raw values were replaced by 0 in this column.
  bool flagged = false;
};

struct FeatureMatrix {
  std::vector<std::string> entity_order;
  std::vector<FeatureColumn> columns;

  std::size_t row_count() const { return entity_order.size(); }
  std::size_t column_count() const { return columns.size(); }
};

/// Statistical test applied to one feature column.
enum class TestKind { Fisher, KsBinaryFeature, KsBinaryTarget, Kendall, None };

std::string to_string(TestKind kind);

struct RelevanceRow {
  std::string feature;
  /// NaN when the column was not testable (constant feature).
  double p_value = 0.0;
  TestKind test = TestKind::None;
  bool relevant = false;
};

struct RelevanceTable {
  std::vector<RelevanceRow> rows;
};

enum class PcaPlacement { None, Before, After };
enum class ByMode { Global, PaperLiteral };

/// Tuning knobs for the selection pipeline.
struct SelectionConfig {
  double q = 0.10;                           ///< FDR level, in (0, 1]
  PcaPlacement pca = PcaPlacement::None;
  double variance_fraction = 0.95;           ///< PCA retained-variance fraction, in (0, 1]
  ByMode by_mode = ByMode::Global;
  /// Mapping grid; nullopt selects the default 111-column registry (an
  /// explicitly empty grid extracts meta columns only).
  std::optional<std::vector<MappingSpec>> registry;
  /// 0 selects the hardware concurrency.
  unsigned worker_count = 0;
};

/// Renders v with enough digits to reparse bit-faithfully (printf %.17g form).
std::string format_value(double v);

/// Renders a parameter value compactly: integral values without a decimal
/// point, everything else in shortest round-trip form.
std::string format_param(double v);

}  // namespace freshx
