#include "freshx/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace freshx {

Codomain classify_codomain(std::span<const double> values) {
  double first = values.empty() ? 0.0 : values.front();
  double second = first;
  bool has_second = false;
  for (double v : values) {
    if (v == first) continue;
    if (!has_second) {
      second = v;
      has_second = true;
    } else if (v != second) {
      return Codomain::Continuous;
    }
  }
  return has_second ? Codomain::Binary : Codomain::Constant;
}

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Fisher: return "fisher";
    case TestKind::KsBinaryFeature: return "ks_binary_feature";
    case TestKind::KsBinaryTarget: return "ks_binary_target";
    case TestKind::Kendall: return "kendall";
    case TestKind::None: return "none";
  }
  return "none";
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_param(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 9007199254740992.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string ColumnId::name() const {
  std::string out = kind.empty() ? mapping : kind + "__" + mapping;
  for (const auto& [pname, pval] : params) {
    out += "__";
    out += pname;
    out += '-';
    out += format_param(pval);
  }
  return out;
}

}  // namespace freshx
