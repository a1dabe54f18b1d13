#include "freshx/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string_view>
#include <unordered_map>
#include <utility>

namespace freshx {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(ErrorCode::Io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError(ErrorCode::Io, "read failure on '" + path + "'");
  return text;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(delim, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

std::string context(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

double parse_real(std::string_view field, const std::string& path,
                  std::size_t line_no, std::string_view column) {
  double out = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() ||
      !std::isfinite(out)) {
    throw DataError(ErrorCode::UnparsableValue,
                    context(path, line_no) + ": column '" + std::string(column) +
                        "' has unparsable value '" + std::string(field) + "'");
  }
  return out;
}

std::size_t find_column(const std::vector<std::string_view>& header,
                        const std::string& name, const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError(ErrorCode::MissingColumn,
                  "'" + path + "' is missing column '" + name + "'");
}

void check_width(const std::vector<std::string_view>& fields, std::size_t want,
                 const std::string& path, std::size_t line_no) {
  if (fields.size() != want) {
    throw DataError(ErrorCode::UnparsableValue,
                    context(path, line_no) + ": expected " + std::to_string(want) +
                        " fields, got " + std::to_string(fields.size()));
  }
}

void validate_name(std::string_view name, const std::string& what,
                   const std::string& where) {
  if (name.empty())
    throw DataError(ErrorCode::BadName, where + ": empty " + what + " name");
  if (name.find("__") != std::string_view::npos)
    throw DataError(ErrorCode::BadName, where + ": " + what + " name '" +
                                            std::string(name) +
                                            "' must not contain '__'");
}

void require_writable_field(std::string_view field, char delim,
                            const std::string& path) {
  if (field.find(delim) != std::string_view::npos ||
      field.find('\n') != std::string_view::npos ||
      field.find('\r') != std::string_view::npos) {
    throw DataError(ErrorCode::BadName,
                    "'" + path + "': field '" + std::string(field) +
                        "' contains the delimiter or a line break");
  }
}

std::vector<std::string_view> header_of(const std::vector<std::string_view>& lines,
                                        const std::string& path, char delim) {
  if (lines.empty())
    throw DataError(ErrorCode::Io, "'" + path + "' is empty");
  return split_fields(lines[0], delim);
}

}  // namespace

Dataset read_long_format(const std::string& path, const LongSchema& schema,
                         const CsvOptions& opts) {
  std::string text = read_file(path);
  auto lines = split_lines(text);
  auto header = header_of(lines, path, opts.delimiter);
  std::size_t id_i = find_column(header, schema.id, path);
  std::size_t time_i = find_column(header, schema.time, path);
  std::size_t kind_i = find_column(header, schema.kind, path);
  std::size_t value_i = find_column(header, schema.value, path);

  Dataset ds;
  std::unordered_map<std::string_view, std::size_t> entity_index;
  std::unordered_map<std::string_view, std::size_t> kind_index;
  // grouped[k][e] collects (time, value) pairs in file order.
  std::vector<std::vector<std::vector<std::pair<double, double>>>> grouped;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li], opts.delimiter);
    check_width(fields, header.size(), path, li + 1);
    std::string_view id = fields[id_i];
    std::string_view kind = fields[kind_i];
    if (id.empty())
      throw DataError(ErrorCode::BadName, context(path, li + 1) + ": empty id");
    validate_name(kind, "kind", context(path, li + 1));
    double t = parse_real(fields[time_i], path, li + 1, schema.time);
    double v = parse_real(fields[value_i], path, li + 1, schema.value);

    auto [eit, enew] = entity_index.try_emplace(id, ds.entity_order.size());
    if (enew) {
      ds.entity_order.emplace_back(id);
      for (auto& per_kind : grouped) per_kind.emplace_back();
    }
    auto [kit, knew] = kind_index.try_emplace(kind, ds.kind_order.size());
    if (knew) {
      ds.kind_order.emplace_back(kind);
      grouped.emplace_back(ds.entity_order.size());
    }
    grouped[kit->second][eit->second].emplace_back(t, v);
  }

  ds.series.resize(ds.kind_order.size());
  for (std::size_t k = 0; k < grouped.size(); ++k) {
    std::size_t n_t = grouped[k].empty() ? 0 : grouped[k][0].size();
    ds.series[k].resize(ds.entity_order.size());
    for (std::size_t e = 0; e < grouped[k].size(); ++e) {
      auto& group = grouped[k][e];
      if (group.size() != n_t) {
        throw DataError(ErrorCode::RaggedKind,
                        "'" + path + "': kind '" + ds.kind_order[k] +
                            "' has length " + std::to_string(group.size()) +
                            " for entity '" + ds.entity_order[e] +
                            "' but length " + std::to_string(n_t) +
                            " for entity '" + ds.entity_order[0] + "'");
      }
      if (group.empty()) {
        throw DataError(ErrorCode::RaggedKind,
                        "'" + path + "': kind '" + ds.kind_order[k] +
                            "' has no samples for entity '" +
                            ds.entity_order[e] + "'");
      }
      std::stable_sort(group.begin(), group.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t i = 1; i < group.size(); ++i) {
        if (group[i].first == group[i - 1].first) {
          throw DataError(ErrorCode::DuplicateTimestamp,
                          "'" + path + "': duplicate time " +
                              format_param(group[i].first) + " for entity '" +
                              ds.entity_order[e] + "', kind '" +
                              ds.kind_order[k] + "'");
        }
      }
      auto& dst = ds.series[k][e];
      dst.reserve(group.size());
      for (const auto& [t, v] : group) dst.push_back(v);
    }
  }
  return ds;
}

Dataset read_wide_format(const std::string& path, const CsvOptions& opts) {
  std::string text = read_file(path);
  auto lines = split_lines(text);
  auto header = header_of(lines, path, opts.delimiter);
  std::size_t id_i = find_column(header, "id", path);
  std::size_t time_i = find_column(header, "time", path);

  Dataset ds;
  std::vector<std::size_t> kind_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == id_i || i == time_i) continue;
    validate_name(header[i], "kind", context(path, 1));
    ds.kind_order.emplace_back(header[i]);
    kind_cols.push_back(i);
  }

  std::unordered_map<std::string_view, std::size_t> entity_index;
  // rows[e] collects (time, values-per-kind) in file order.
  std::vector<std::vector<std::pair<double, std::vector<double>>>> rows;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li], opts.delimiter);
    check_width(fields, header.size(), path, li + 1);
    std::string_view id = fields[id_i];
    if (id.empty())
      throw DataError(ErrorCode::BadName, context(path, li + 1) + ": empty id");
    double t = parse_real(fields[time_i], path, li + 1, "time");
    std::vector<double> vals(kind_cols.size());
    for (std::size_t k = 0; k < kind_cols.size(); ++k)
      vals[k] = parse_real(fields[kind_cols[k]], path, li + 1, header[kind_cols[k]]);

    auto [eit, enew] = entity_index.try_emplace(id, ds.entity_order.size());
    if (enew) {
      ds.entity_order.emplace_back(id);
      rows.emplace_back();
    }
    rows[eit->second].emplace_back(t, std::move(vals));
  }

  std::size_t n_t = rows.empty() ? 0 : rows[0].size();
  for (std::size_t e = 0; e < rows.size(); ++e) {
    auto& group = rows[e];
    if (group.size() != n_t) {
      throw DataError(ErrorCode::RaggedKind,
                      "'" + path + "': entity '" + ds.entity_order[e] + "' has " +
                          std::to_string(group.size()) + " rows but entity '" +
                          ds.entity_order[0] + "' has " + std::to_string(n_t));
    }
    if (group.empty()) {
      throw DataError(ErrorCode::RaggedKind, "'" + path + "': entity '" +
                                                 ds.entity_order[e] +
                                                 "' has no samples");
    }
    std::stable_sort(group.begin(), group.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (group[i].first == group[i - 1].first) {
        throw DataError(ErrorCode::DuplicateTimestamp,
                        "'" + path + "': duplicate time " +
                            format_param(group[i].first) + " for entity '" +
                            ds.entity_order[e] + "'");
      }
    }
  }

  ds.series.assign(ds.kind_order.size(), {});
  for (std::size_t k = 0; k < ds.kind_order.size(); ++k) {
    ds.series[k].resize(ds.entity_order.size());
    for (std::size_t e = 0; e < rows.size(); ++e) {
      auto& dst = ds.series[k][e];
      dst.reserve(n_t);
      for (const auto& [t, vals] : rows[e]) dst.push_back(vals[k]);
    }
  }
  return ds;
}

TargetVector read_targets(const std::string& path,
                          std::span<const std::string> entity_order,
                          const CsvOptions& opts) {
  std::string text = read_file(path);
  auto lines = split_lines(text);
  auto header = header_of(lines, path, opts.delimiter);
  std::size_t id_i = find_column(header, "id", path);
  std::size_t target_i = find_column(header, "target", path);

  std::unordered_map<std::string_view, std::size_t> order;
  for (std::size_t e = 0; e < entity_order.size(); ++e)
    order.emplace(entity_order[e], e);

  TargetVector tv;
  tv.values.assign(entity_order.size(),
                   std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(entity_order.size(), false);

  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li], opts.delimiter);
    check_width(fields, header.size(), path, li + 1);
    auto it = order.find(fields[id_i]);
    if (it == order.end()) {
      throw DataError(ErrorCode::MissingEntity,
                      context(path, li + 1) + ": unknown entity '" +
                          std::string(fields[id_i]) + "'");
    }
    if (seen[it->second]) {
      throw DataError(ErrorCode::DuplicateEntity,
                      context(path, li + 1) + ": duplicate entity '" +
                          std::string(fields[id_i]) + "'");
    }
    seen[it->second] = true;
    tv.values[it->second] = parse_real(fields[target_i], path, li + 1, "target");
  }
  for (std::size_t e = 0; e < entity_order.size(); ++e) {
    if (!seen[e]) {
      throw DataError(ErrorCode::MissingEntity, "'" + path +
                                                    "': no target for entity '" +
                                                    entity_order[e] + "'");
    }
  }

  Codomain c = classify_codomain(tv.values);
  if (c == Codomain::Constant || tv.values.empty()) {
    throw DataError(ErrorCode::ConstantTarget,
                    "'" + path + "': target needs at least two distinct values");
  }
  tv.codomain = c;
  return tv;
}

void read_meta(const std::string& path, Dataset& dataset,
               const CsvOptions& opts) {
  std::string text = read_file(path);
  auto lines = split_lines(text);
  auto header = header_of(lines, path, opts.delimiter);
  if (header.empty() || header[0] != "id")
    throw DataError(ErrorCode::MissingColumn,
                    "'" + path + "': first column must be 'id'");

  std::vector<std::string> attrs;
  for (std::size_t i = 1; i < header.size(); ++i) {
    validate_name(header[i], "attribute", context(path, 1));
    attrs.emplace_back(header[i]);
  }
  for (std::size_t i = 0; i < attrs.size(); ++i)
    for (std::size_t j = i + 1; j < attrs.size(); ++j)
      if (attrs[i] == attrs[j])
        throw DataError(ErrorCode::BadName, "'" + path +
                                                "': duplicate attribute '" +
                                                attrs[i] + "'");

  std::unordered_map<std::string_view, std::size_t> order;
  for (std::size_t e = 0; e < dataset.entity_order.size(); ++e)
    order.emplace(dataset.entity_order[e], e);

  std::vector<std::vector<double>> block(
      attrs.size(), std::vector<double>(dataset.entity_order.size(), 0.0));
  std::vector<bool> seen(dataset.entity_order.size(), false);

  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li], opts.delimiter);
    check_width(fields, header.size(), path, li + 1);
    auto it = order.find(fields[0]);
    if (it == order.end()) {
      throw DataError(ErrorCode::MissingEntity,
                      context(path, li + 1) + ": unknown entity '" +
                          std::string(fields[0]) + "'");
    }
    if (seen[it->second]) {
      throw DataError(ErrorCode::DuplicateEntity,
                      context(path, li + 1) + ": duplicate entity '" +
                          std::string(fields[0]) + "'");
    }
    seen[it->second] = true;
    for (std::size_t a = 0; a < attrs.size(); ++a)
      block[a][it->second] = parse_real(fields[a + 1], path, li + 1, attrs[a]);
  }
  for (std::size_t e = 0; e < dataset.entity_order.size(); ++e) {
    if (!seen[e]) {
      throw DataError(ErrorCode::MissingEntity,
                      "'" + path + "': no meta row for entity '" +
                          dataset.entity_order[e] + "'");
    }
  }

  for (std::size_t a = 0; a < attrs.size(); ++a) {
    dataset.meta_names.push_back(std::move(attrs[a]));
    dataset.meta.push_back(std::move(block[a]));
  }
}

void write_feature_matrix(const FeatureMatrix& matrix, const std::string& path,
                          const CsvOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(ErrorCode::Io, "cannot open '" + path + "' for writing");

  out << "id";
  for (const auto& col : matrix.columns) {
    std::string name = col.id.name();
    require_writable_field(name, opts.delimiter, path);
    out << opts.delimiter << name;
  }
  out << '\n';
  for (std::size_t e = 0; e < matrix.entity_order.size(); ++e) {
    require_writable_field(matrix.entity_order[e], opts.delimiter, path);
    out << matrix.entity_order[e];
    for (const auto& col : matrix.columns)
      out << opts.delimiter << format_value(col.values[e]);
    out << '\n';
  }
  out.flush();
  if (!out) throw DataError(ErrorCode::Io, "write failure on '" + path + "'");
}

namespace {

ColumnId parse_column_token(std::string_view token, const std::string& path) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t sep = token.find("__", start);
    if (sep == std::string_view::npos) {
      parts.push_back(token.substr(start));
      break;
    }
    parts.push_back(token.substr(start, sep - start));
    start = sep + 2;
  }
  ColumnId id;
  if (parts.size() == 1) {
    id.mapping = std::string(parts[0]);
  } else {
    id.kind = std::string(parts[0]);
    id.mapping = std::string(parts[1]);
    for (std::size_t i = 2; i < parts.size(); ++i) {
      std::size_t dash = parts[i].find('-');
      if (dash == std::string_view::npos || dash == 0) {
        throw DataError(ErrorCode::UnparsableValue,
                        "'" + path + "': malformed parameter token '" +
                            std::string(parts[i]) + "' in column '" +
                            std::string(token) + "'");
      }
      std::string_view vs = parts[i].substr(dash + 1);
      double v = 0.0;
      auto res = std::from_chars(vs.data(), vs.data() + vs.size(), v);
      if (res.ec != std::errc() || res.ptr != vs.data() + vs.size()) {
        throw DataError(ErrorCode::UnparsableValue,
                        "'" + path + "': unparsable parameter value in column '" +
                            std::string(token) + "'");
      }
      id.params.emplace_back(std::string(parts[i].substr(0, dash)), v);
    }
  }
  if (id.mapping.empty()) {
    throw DataError(ErrorCode::BadName,
                    "'" + path + "': malformed column token '" +
                        std::string(token) + "'");
  }
  return id;
}

}  // namespace

FeatureMatrix read_feature_matrix(const std::string& path,
                                  const CsvOptions& opts) {
  std::string text = read_file(path);
  auto lines = split_lines(text);
  auto header = header_of(lines, path, opts.delimiter);
  if (header.empty() || header[0] != "id")
    throw DataError(ErrorCode::MissingColumn,
                    "'" + path + "': first column must be 'id'");

  FeatureMatrix m;
  for (std::size_t i = 1; i < header.size(); ++i) {
    FeatureColumn col;
    col.id = parse_column_token(header[i], path);
    m.columns.push_back(std::move(col));
  }

  std::unordered_map<std::string_view, bool> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto fields = split_fields(lines[li], opts.delimiter);
    check_width(fields, header.size(), path, li + 1);
    auto [it, fresh] = seen.try_emplace(fields[0], true);
    if (!fresh) {
      throw DataError(ErrorCode::DuplicateEntity,
                      context(path, li + 1) + ": duplicate entity '" +
                          std::string(fields[0]) + "'");
    }
    m.entity_order.emplace_back(fields[0]);
    for (std::size_t c = 0; c < m.columns.size(); ++c)
      m.columns[c].values.push_back(
          parse_real(fields[c + 1], path, li + 1, header[c + 1]));
  }
  for (auto& col : m.columns) col.codomain = classify_codomain(col.values);
  return m;
}

void write_relevance_table(const RelevanceTable& table, const std::string& path,
                           const CsvOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(ErrorCode::Io, "cannot open '" + path + "' for writing");
  const char d = opts.delimiter;
  out << "feature" << d << "p_value" << d << "test" << d << "relevant" << '\n';
  for (const auto& row : table.rows) {
    require_writable_field(row.feature, d, path);
    out << row.feature << d;
    if (!std::isnan(row.p_value)) out << format_value(row.p_value);
    out << d << to_string(row.test) << d << (row.relevant ? "true" : "false")
        << '\n';
  }
  out.flush();
  if (!out) throw DataError(ErrorCode::Io, "write failure on '" + path + "'");
}

}  // namespace freshx
