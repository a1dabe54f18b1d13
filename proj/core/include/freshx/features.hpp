#pragma once

#include <span>
#include <string>
#include <vector>

#include "freshx/types.hpp"

namespace freshx {

/// Ordered catalog expanded over the default parameter grid; exactly 111
/// entries, one per output column per kind.
std::vector<MappingSpec> default_registry();

/// True when name denotes a catalog mapping.
bool is_known_mapping(const std::string& name);

/// Parses a registry description and returns the expanded entry list in
/// file order.  The format is a JSON object keyed by mapping name; each
/// value is an array of parameter-binding objects, e.g.
///
///   { "mean": [{}],
///     "quantile": [{"q": 0.25}, {"q": 0.5}],
///     "continuous_wavelet_transformation_coefficients":
///       [{"a": 2, "b": 0}, {"a": 2, "b": "half_length"}] }
///
/// The string "half_length" defers a parameter to floor(n_t / 2) at
/// extraction time.  Unknown mapping or parameter names are rejected.
std::vector<MappingSpec> registry_from_json(const std::string& text);

/// registry_from_json over the contents of a file.
std::vector<MappingSpec> load_registry_file(const std::string& path);

/// Column identity for one registry entry applied to one kind; half_length
/// parameters are resolved against n_t.
ColumnId make_column_id(const std::string& kind, const MappingSpec& spec,
                        std::size_t n_t);

/// Evaluates one mapping on one series.  NaN marks a value the mapping
/// cannot produce (out-of-range parameter, degenerate input); the pipeline
/// later replaces NaN by 0 and flags the column.
double extract_feature(const MappingSpec& spec, std::span<const double> series);

/// Evaluates a run of registry entries sharing one mapping name, reusing
/// per-series intermediates (sorting, model fits) across the run.  Writes
/// one value per entry to out.
void extract_family(std::span<const MappingSpec> specs,
                    std::span<const double> series, std::span<double> out);

}  // namespace freshx
