#include "freshx/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <string_view>
#include <unordered_map>

#include <Eigen/Dense>

#include <json.hpp>

namespace freshx {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- catalog

struct CatalogEntry {
  std::string_view name;
  std::vector<std::string_view> params;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"maximum", {}},
      {"minimum", {}},
      {"mean", {}},
      {"var", {}},
      {"std", {}},
      {"skewness", {}},
      {"kurtosis", {}},
      {"length", {}},
      {"median", {}},
      {"quantile", {"q"}},
      {"absolute_energy", {}},
      {"augmented_dickey_fuller_test_statistic", {}},
      {"binned_entropy", {"m"}},
      {"has_large_standard_deviation", {}},
      {"has_variance_larger_than_std", {}},
      {"is_symmetric_looking", {}},
      {"mass_quantile", {"q"}},
      {"number_data_points_above_mean", {}},
      {"number_data_points_above_median", {}},
      {"number_data_points_below_mean", {}},
      {"number_data_points_below_median", {}},
      {"arima_model_coefficients", {"i", "k"}},
      {"continuous_wavelet_transformation_coefficients", {"a", "b"}},
      {"fast_fourier_transformation_coefficient", {"k"}},
      {"first_index_max", {}},
      {"first_index_min", {}},
      {"lagged_autocorrelation", {"l"}},
      {"large_number_of_peaks", {"l", "m"}},
      {"last_index_max", {}},
      {"last_index_min", {}},
      {"longest_strike_above_mean", {}},
      {"longest_strike_above_median", {}},
      {"longest_strike_below_mean", {}},
      {"longest_strike_below_median", {}},
      {"longest_strike_negative", {}},
      {"longest_strike_positive", {}},
      {"longest_strike_zero", {}},
      {"mean_absolute_change", {}},
      {"mean_absolute_change_quantiles", {"q_l", "q_h"}},
      {"mean_autocorrelation", {}},
      {"mean_second_derivate_central", {}},
      {"number_continous_wavelet_transformation_peaks_of_size", {"l"}},
      {"number_peaks_of_size", {"l"}},
      {"spektral_welch_density", {"i"}},
      {"time_reversal_asymmetry_statistic", {"l"}},
  };
  return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

// ------------------------------------------------------------- parameters

double resolve(const ParamValue& pv, std::size_t n_t) {
  return pv.half_length ? static_cast<double>(n_t / 2) : pv.value;
}

double get_param(const MappingSpec& spec, std::string_view name,
                 std::size_t n_t) {
  for (const auto& [k, v] : spec.params)
    if (k == name) return resolve(v, n_t);
  throw DataError(ErrorCode::BadName, "mapping '" + spec.name +
                                          "' is missing parameter '" +
                                          std::string(name) + "'");
}

long long get_iparam(const MappingSpec& spec, std::string_view name,
                     std::size_t n_t) {
  return std::llround(get_param(spec, name, n_t));
}

// ---------------------------------------------------------------- helpers

double mean_of(std::span<const double> s) {
  double acc = 0.0;
  for (double v : s) acc += v;
  return acc / static_cast<double>(s.size());
}

// Uncorrected variance, 1/n_t normalization.
double var_of(std::span<const double> s, double mean) {
  double acc = 0.0;
  for (double v : s) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(s.size());
}

std::vector<double> sorted_copy(std::span<const double> s) {
  std::vector<double> out(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

double median_sorted(std::span<const double> sorted) {
  std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

/// q-quantile of the empirical distribution function: the smallest sorted
/// value whose rank k satisfies k/n >= q.
double quantile_sorted(std::span<const double> sorted, double q) {
  std::size_t n = sorted.size();
  if (!(q > 0.0) || q > 1.0 || n == 0) return kNaN;
  double nd = static_cast<double>(n);
  std::size_t k = static_cast<std::size_t>(std::ceil(q * nd));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / nd >= q) --k;
  while (k < n && static_cast<double>(k) / nd < q) ++k;
  return sorted[k - 1];
}

template <class Pred>
double longest_run(std::span<const double> s, Pred pred) {
  std::size_t best = 0, cur = 0;
  for (double v : s) {
    cur = pred(v) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return static_cast<double>(best);
}

double count_peaks(std::span<const double> s, long long l) {
  if (l < 1) return kNaN;
  std::size_t n = s.size();
  std::size_t support = static_cast<std::size_t>(l);
  if (n < 2 * support + 1) return 0.0;
  std::size_t count = 0;
  for (std::size_t i = support; i + support < n; ++i) {
    bool peak = true;
    for (std::size_t d = 1; d <= support && peak; ++d)
      peak = s[i] > s[i - d] && s[i] > s[i + d];
    count += peak;
  }
  return static_cast<double>(count);
}

// ------------------------------------------------------------ regressions

/// Least-squares fit through the normal equations.  Returns false when the
/// system is singular or the solution fails a residual check.
bool solve_normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            Eigen::VectorXd& beta) {
  Eigen::MatrixXd A = X.transpose() * X;
  Eigen::VectorXd c = X.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) return false;
  beta = ldlt.solve(c);
  if (!beta.allFinite()) return false;
  double resid = (A * beta - c).norm();
  return resid <= 1e-8 * (c.norm() + 1.0);
}

/// AR(k) conditional least squares; beta holds (intercept, phi_1..phi_k).
bool fit_ar(std::span<const double> s, long long k, Eigen::VectorXd& beta) {
  if (k < 1) return false;
  std::size_t n = s.size();
  std::size_t lag = static_cast<std::size_t>(k);
  if (n < lag + 1) return false;
  std::size_t rows = n - lag;
  std::size_t cols = lag + 1;
  if (rows < cols) return false;
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    y(r) = s[lag + r];
    X(r, 0) = 1.0;
    for (std::size_t j = 1; j <= lag; ++j) X(r, j) = s[lag + r - j];
  }
  return solve_normal_equations(X, y, beta);
}

/// Unit-root regression: delta s_nu on (1, s_{nu-1}, delta s_{nu-1} ..
/// delta s_{nu-p}) with p = floor((n_t - 1)^(1/3)); returns the
/// t-statistic of the level coefficient.
double adf_statistic(std::span<const double> s) {
  std::size_t n = s.size();
  if (n < 2) return kNaN;
  std::size_t p = static_cast<std::size_t>(
      std::floor(std::cbrt(static_cast<double>(n - 1)) + 1e-12));
  if (p < 1) p = 1;
  if (n < p + 2) return kNaN;
  std::size_t rows = n - p - 1;
  std::size_t cols = p + 2;
  if (rows <= cols) return kNaN;
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    // 1-based nu = p + 2 + r
    std::size_t nu0 = p + 1 + r;  // 0-based index of s_nu
    y(r) = s[nu0] - s[nu0 - 1];
    X(r, 0) = 1.0;
    X(r, 1) = s[nu0 - 1];
    for (std::size_t j = 1; j <= p; ++j)
      X(r, 1 + j) = s[nu0 - j] - s[nu0 - j - 1];
  }
  Eigen::MatrixXd A = X.transpose() * X;
  Eigen::VectorXd c = X.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) return kNaN;
  Eigen::VectorXd beta = ldlt.solve(c);
  if (!beta.allFinite()) return kNaN;
  if ((A * beta - c).norm() > 1e-8 * (c.norm() + 1.0)) return kNaN;
  double rss = (y - X * beta).squaredNorm();
  double dof = static_cast<double>(rows - cols);
  double sigma2 = rss / dof;
  Eigen::MatrixXd inv =
      ldlt.solve(Eigen::MatrixXd::Identity(cols, cols));
  double v = sigma2 * inv(1, 1);
  if (!(v > 0.0) || !std::isfinite(v)) return kNaN;
  return beta(1) / std::sqrt(v);
}

// ------------------------------------------------------------ transforms

/// Re X_k of the discrete Fourier transform, via incremental rotation.
double fft_real_coefficient(std::span<const double> s, long long k) {
  if (k < 0) return kNaN;
  std::size_t n = s.size();
  double w = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
  double cw = std::cos(w), sw = std::sin(w);
  double cr = 1.0, ci = 0.0;
  double acc = 0.0;
  for (double v : s) {
    acc += v * cr;
    double nr = cr * cw - ci * sw;
    ci = cr * sw + ci * cw;
    cr = nr;
  }
  return acc;
}

/// Ricker wavelet of width a evaluated at offset t from the location.
double ricker(double t, double a) {
  double x = t / a;
  return 2.0 / (std::sqrt(3.0 * a) * std::pow(kPi, 0.25)) * (1.0 - x * x) *
         std::exp(-0.5 * x * x);
}

/// Wavelet coefficient X_w(a, b): convolution of the series with the
/// Ricker wavelet, positions counted from 1.
double cwt_coefficient(std::span<const double> s, double a, double b) {
  if (!(a > 0.0)) return kNaN;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    acc += s[i] * ricker(static_cast<double>(i + 1) - b, a);
  return acc;
}

/// Power spectral density at frequency index i by Welch's method: segments
/// of length min(256, n_t), 50% overlap, periodic Hann window, per-segment
/// mean removal, one-sided scaling at unit sample rate.
double welch_density(std::span<const double> s, long long i) {
  std::size_t n = s.size();
  if (n == 0 || i < 0) return kNaN;
  std::size_t N = std::min<std::size_t>(256, n);
  std::size_t half = N / 2;
  if (static_cast<std::size_t>(i) > half) return kNaN;
  std::size_t step = N - N / 2;

  std::vector<double> w(N);
  double U = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    w[j] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(j) /
                                static_cast<double>(N));
    U += w[j] * w[j];
  }
  if (!(U > 0.0)) return kNaN;

  double omega = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(N);
  double cw = std::cos(omega), sw = std::sin(omega);

  double power = 0.0;
  std::size_t segments = 0;
  for (std::size_t start = 0; start + N <= n; start += step) {
    double seg_mean = 0.0;
    for (std::size_t j = 0; j < N; ++j) seg_mean += s[start + j];
    seg_mean /= static_cast<double>(N);
    double re = 0.0, im = 0.0;
    double cr = 1.0, ci = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      double v = (s[start + j] - seg_mean) * w[j];
      re += v * cr;
      im -= v * ci;
      double nr = cr * cw - ci * sw;
      ci = cr * sw + ci * cw;
      cr = nr;
    }
    power += re * re + im * im;
    ++segments;
  }
  power /= static_cast<double>(segments) * U;
  bool interior = i > 0 && !(N % 2 == 0 && static_cast<std::size_t>(i) == half);
  if (interior) power *= 2.0;
  return power;
}

// ------------------------------------------------------- wavelet peaks

/// Ridge-line peak count over rows[a-1][b-1] = X_w(a, b), widths 1..l.
/// Ridges walk from the largest width down, linking per-row local maxima
/// within distance ceil(a/4), no gaps.  A ridge counts when it spans at
/// least ceil(l/4) widths and its smallest-width coefficient is at least
/// 3 times the local noise floor (10th percentile of |X_w(1, .)| over a
/// window of 2l+1 positions).
double count_cwt_ridges(const std::vector<std::vector<double>>& rows,
                        long long l) {
  std::size_t widths = rows.size();
  std::size_t n = rows[0].size();

  auto local_maxima = [&](const std::vector<double>& row) {
    std::vector<std::size_t> maxima;  // 1-based positions
    for (std::size_t b = 0; b < n; ++b) {
      double v = std::abs(row[b]);
      bool up = b == 0 || v > std::abs(row[b - 1]);
      bool down = b + 1 == n || v > std::abs(row[b + 1]);
      if (up && down) maxima.push_back(b + 1);
    }
    return maxima;
  };

  struct Ridge {
    std::size_t last_pos;
    std::size_t length;
    std::size_t lo_pos;
    std::size_t lo_width;
    bool extended;
  };
  std::vector<Ridge> active;
  std::vector<Ridge> finished;
  // Ridge ends indexed by position, so each maximum only inspects the
  // 2*link+1 buckets it could link to instead of every active ridge.
  std::vector<std::vector<std::size_t>> by_pos(n + 1);
  std::vector<std::size_t> touched;

  for (std::size_t a = widths; a >= 1; --a) {
    auto maxima = local_maxima(rows[a - 1]);
    if (a == widths) {
      for (std::size_t p : maxima)
        active.push_back({p, 1, p, a, false});
      continue;
    }
    std::size_t link = (a + 3) / 4;
    for (auto& r : active) r.extended = false;
    for (std::size_t p : touched) by_pos[p].clear();
    touched.clear();
    for (std::size_t i = 0; i < active.size(); ++i) {
      std::size_t p = active[i].last_pos;
      if (by_pos[p].empty()) touched.push_back(p);
      by_pos[p].push_back(i);
    }
    std::vector<Ridge> next;
    for (std::size_t p : maxima) {
      // nearest unextended ridge end; ties go to the smaller position,
      // then to the ridge listed first
      Ridge* best = nullptr;
      std::size_t best_dist = link + 1;
      std::size_t lo = p > link ? p - link : 1;
      std::size_t hi = std::min(n, p + link);
      for (std::size_t pos = lo; pos <= hi; ++pos) {
        std::size_t dist = pos > p ? pos - p : p - pos;
        if (dist > best_dist ||
            (dist == best_dist && best && pos > best->last_pos))
          continue;
        for (std::size_t i : by_pos[pos]) {
          Ridge& r = active[i];
          if (r.extended) continue;
          if (dist < best_dist ||
              (dist == best_dist && best && r.last_pos < best->last_pos)) {
            best = &r;
            best_dist = dist;
          }
        }
      }
      if (best) {
        best->extended = true;
        best->last_pos = p;
        best->length += 1;
        best->lo_pos = p;
        best->lo_width = a;
      } else {
        next.push_back({p, 1, p, a, true});
      }
    }
    for (auto& r : active) {
      if (r.extended)
        next.push_back(r);
      else
        finished.push_back(r);
    }
    active = std::move(next);
  }
  for (auto& r : active) finished.push_back(r);

  std::size_t min_length = static_cast<std::size_t>((l + 3) / 4);
  std::size_t count = 0;
  for (const auto& r : finished) {
    if (r.length < min_length) continue;
    double signal = std::abs(rows[r.lo_width - 1][r.lo_pos - 1]);
    std::size_t lo = r.lo_pos > static_cast<std::size_t>(l)
                         ? r.lo_pos - static_cast<std::size_t>(l)
                         : 1;
    std::size_t hi = std::min(n, r.lo_pos + static_cast<std::size_t>(l));
    std::vector<double> window;
    window.reserve(hi - lo + 1);
    for (std::size_t b = lo; b <= hi; ++b)
      window.push_back(std::abs(rows[0][b - 1]));
    std::sort(window.begin(), window.end());
    std::size_t rank = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(0.1 * static_cast<double>(window.size()))));
    double noise = window[rank - 1];
    bool ok = noise == 0.0 ? signal > 0.0 : signal >= 3.0 * noise;
    if (ok) ++count;
  }
  return static_cast<double>(count);
}

double cwt_peak_count(std::span<const double> s, long long l) {
  if (l < 1) return kNaN;
  std::size_t n = s.size();
  if (n == 0) return kNaN;
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(l));
  for (std::size_t a = 1; a <= static_cast<std::size_t>(l); ++a) {
    auto& row = rows[a - 1];
    row.resize(n);
    std::size_t radius = 10 * a;
    double width = static_cast<double>(a);
    // positions and locations are integers, so the wavelet only needs to
    // be sampled once per offset
    std::vector<double> kernel(2 * radius + 1);
    for (std::size_t t = 0; t < kernel.size(); ++t)
      kernel[t] =
          ricker(static_cast<double>(t) - static_cast<double>(radius), width);
    for (std::size_t b = 1; b <= n; ++b) {
      std::size_t lo = b > radius ? b - radius : 1;
      std::size_t hi = std::min(n, b + radius);
      double acc = 0.0;
      for (std::size_t nu = lo; nu <= hi; ++nu)
        acc += s[nu - 1] * kernel[nu + radius - b];
      row[b - 1] = acc;
    }
  }
  return count_cwt_ridges(rows, l);
}

// ------------------------------------------------------ family evaluators

using Series = std::span<const double>;
using Specs = std::span<const MappingSpec>;

void eval_maximum(Specs, Series s, std::span<double> out) {
  double v = *std::max_element(s.begin(), s.end());
  std::fill(out.begin(), out.end(), v);
}

void eval_minimum(Specs, Series s, std::span<double> out) {
  double v = *std::min_element(s.begin(), s.end());
  std::fill(out.begin(), out.end(), v);
}

void eval_mean(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(), mean_of(s));
}

void eval_var(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(), var_of(s, mean_of(s)));
}

void eval_std(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(), std::sqrt(var_of(s, mean_of(s))));
}

void eval_skewness(Specs, Series s, std::span<double> out) {
  std::size_t n = s.size();
  if (n < 3) {
    std::fill(out.begin(), out.end(), kNaN);
    return;
  }
  double m = mean_of(s);
  double s2 = 0.0, s3 = 0.0;
  for (double v : s) {
    double d = v - m;
    s2 += d * d;
    s3 += d * d * d;
  }
  double nd = static_cast<double>(n);
  double num = s3 / nd;
  double den = std::pow(s2 / (nd - 1.0), 1.5);
  double v = nd * nd / ((nd - 1.0) * (nd - 2.0)) * num / den;
  std::fill(out.begin(), out.end(), std::isfinite(v) ? v : kNaN);
}

void eval_kurtosis(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  double sd = std::sqrt(var_of(s, m));
  if (sd == 0.0) {
    std::fill(out.begin(), out.end(), kNaN);
    return;
  }
  double acc = 0.0;
  for (double v : s) {
    double z = (v - m) / sd;
    acc += z * z * z * z;
  }
  double v = acc / static_cast<double>(s.size()) - 3.0;
  std::fill(out.begin(), out.end(), std::isfinite(v) ? v : kNaN);
}

void eval_length(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(), static_cast<double>(s.size()));
}

void eval_median(Specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  std::fill(out.begin(), out.end(), median_sorted(sorted));
}

void eval_quantile(Specs specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[i] = quantile_sorted(sorted, get_param(specs[i], "q", s.size()));
}

void eval_absolute_energy(Specs, Series s, std::span<double> out) {
  double acc = 0.0;
  for (double v : s) acc += v * v;
  std::fill(out.begin(), out.end(), acc);
}

void eval_adf(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(), adf_statistic(s));
}

void eval_binned_entropy(Specs specs, Series s, std::span<double> out) {
  double lo = *std::min_element(s.begin(), s.end());
  double hi = *std::max_element(s.begin(), s.end());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long bins = get_iparam(specs[i], "m", s.size());
    if (bins < 1) {
      out[i] = kNaN;
      continue;
    }
    if (hi == lo) {
      out[i] = 0.0;
      continue;
    }
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    double width = hi - lo;
    for (double v : s) {
      auto k = static_cast<std::size_t>((v - lo) / width *
                                        static_cast<double>(bins));
      if (k >= counts.size()) k = counts.size() - 1;
      ++counts[k];
    }
    double acc = 0.0;
    double nd = static_cast<double>(s.size());
    for (std::size_t c : counts) {
      if (c == 0) continue;
      double p = static_cast<double>(c) / nd;
      acc += p * std::log(p);
    }
    out[i] = acc;
  }
}

void eval_has_large_standard_deviation(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  double sd = std::sqrt(var_of(s, m));
  double lo = *std::min_element(s.begin(), s.end());
  double hi = *std::max_element(s.begin(), s.end());
  std::fill(out.begin(), out.end(), sd > (hi - lo) / 2.0 ? 1.0 : 0.0);
}

void eval_has_variance_larger_than_std(Specs, Series s, std::span<double> out) {
  double var = var_of(s, mean_of(s));
  std::fill(out.begin(), out.end(), var > std::sqrt(var) ? 1.0 : 0.0);
}

void eval_is_symmetric_looking(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  auto sorted = sorted_copy(s);
  double med = median_sorted(sorted);
  double spread = (sorted.back() - sorted.front()) / 2.0;
  std::fill(out.begin(), out.end(), std::abs(m - med) < spread ? 1.0 : 0.0);
}

void eval_mass_quantile(Specs specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    double q = get_param(specs[i], "q", s.size());
    if (m == 0.0) {
      out[i] = kNaN;
      continue;
    }
    double cum = 0.0;
    double found = kNaN;
    for (std::size_t k = 1; k <= s.size(); ++k) {
      cum += s[k - 1];
      if (cum / m >= q) {
        found = static_cast<double>(k) / static_cast<double>(s.size());
        break;
      }
    }
    out[i] = found;
  }
}

void eval_points_above_mean(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  double c = 0.0;
  for (double v : s) c += v > m;
  std::fill(out.begin(), out.end(), c);
}

void eval_points_above_median(Specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  double med = median_sorted(sorted);
  double c = 0.0;
  for (double v : s) c += v > med;
  std::fill(out.begin(), out.end(), c);
}

void eval_points_below_mean(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  double c = 0.0;
  for (double v : s) c += v < m;
  std::fill(out.begin(), out.end(), c);
}

void eval_points_below_median(Specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  double med = median_sorted(sorted);
  double c = 0.0;
  for (double v : s) c += v < med;
  std::fill(out.begin(), out.end(), c);
}

void eval_arima(Specs specs, Series s, std::span<double> out) {
  // one AR fit per distinct lag order serves all coefficient indices
  std::map<long long, std::pair<bool, Eigen::VectorXd>> fits;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long k = get_iparam(specs[i], "k", s.size());
    long long ci = get_iparam(specs[i], "i", s.size());
    auto it = fits.find(k);
    if (it == fits.end()) {
      Eigen::VectorXd beta;
      bool ok = fit_ar(s, k, beta);
      it = fits.emplace(k, std::make_pair(ok, std::move(beta))).first;
    }
    const auto& [ok, beta] = it->second;
    out[i] = ok && ci >= 0 && ci <= k ? beta(ci) : kNaN;
  }
}

void eval_cwt_coefficients(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    double a = get_param(specs[i], "a", s.size());
    double b = get_param(specs[i], "b", s.size());
    out[i] = cwt_coefficient(s, a, b);
  }
}

void eval_fft(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[i] = fft_real_coefficient(s, get_iparam(specs[i], "k", s.size()));
}

void eval_first_index_max(Specs, Series s, std::span<double> out) {
  auto it = std::max_element(s.begin(), s.end());
  double v = static_cast<double>(it - s.begin() + 1) /
             static_cast<double>(s.size());
  std::fill(out.begin(), out.end(), v);
}

void eval_first_index_min(Specs, Series s, std::span<double> out) {
  auto it = std::min_element(s.begin(), s.end());
  double v = static_cast<double>(it - s.begin() + 1) /
             static_cast<double>(s.size());
  std::fill(out.begin(), out.end(), v);
}

void eval_last_index_max(Specs, Series s, std::span<double> out) {
  double best = s[0];
  std::size_t pos = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] >= best) {
      best = s[i];
      pos = i;
    }
  std::fill(out.begin(), out.end(),
            static_cast<double>(pos + 1) / static_cast<double>(s.size()));
}

void eval_last_index_min(Specs, Series s, std::span<double> out) {
  double best = s[0];
  std::size_t pos = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] <= best) {
      best = s[i];
      pos = i;
    }
  std::fill(out.begin(), out.end(),
            static_cast<double>(pos + 1) / static_cast<double>(s.size()));
}

void eval_lagged_autocorrelation(Specs specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  double var = var_of(s, m);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long l = get_iparam(specs[i], "l", s.size());
    if (l < 1 || var == 0.0) {
      out[i] = kNaN;
      continue;
    }
    double acc = 0.0;
    std::size_t lag = static_cast<std::size_t>(l);
    for (std::size_t nu = 0; nu + lag < s.size(); ++nu)
      acc += (s[nu] - m) * (s[nu + lag] - m);
    out[i] = acc / var;
  }
}

void eval_large_number_of_peaks(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long l = get_iparam(specs[i], "l", s.size());
    long long threshold = get_iparam(specs[i], "m", s.size());
    double peaks = count_peaks(s, l);
    out[i] = std::isnan(peaks) ? kNaN : (peaks > threshold ? 1.0 : 0.0);
  }
}

void eval_strike_above_mean(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  std::fill(out.begin(), out.end(),
            longest_run(s, [m](double v) { return v >= m; }));
}

void eval_strike_above_median(Specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  double med = median_sorted(sorted);
  std::fill(out.begin(), out.end(),
            longest_run(s, [med](double v) { return v >= med; }));
}

void eval_strike_below_mean(Specs, Series s, std::span<double> out) {
  double m = mean_of(s);
  std::fill(out.begin(), out.end(),
            longest_run(s, [m](double v) { return v <= m; }));
}

void eval_strike_below_median(Specs, Series s, std::span<double> out) {
  auto sorted = sorted_copy(s);
  double med = median_sorted(sorted);
  std::fill(out.begin(), out.end(),
            longest_run(s, [med](double v) { return v <= med; }));
}

void eval_strike_negative(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(),
            longest_run(s, [](double v) { return v < 0.0; }));
}

void eval_strike_positive(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(),
            longest_run(s, [](double v) { return v > 0.0; }));
}

void eval_strike_zero(Specs, Series s, std::span<double> out) {
  std::fill(out.begin(), out.end(),
            longest_run(s, [](double v) { return v == 0.0; }));
}

void eval_mean_absolute_change(Specs, Series s, std::span<double> out) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    acc += std::abs(s[i + 1] - s[i]);
  std::fill(out.begin(), out.end(), acc / static_cast<double>(s.size()));
}

void eval_mean_abs_change_quantiles(Specs specs, Series s,
                                    std::span<double> out) {
  auto sorted = sorted_copy(s);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    double ql = get_param(specs[i], "q_l", s.size());
    double qh = get_param(specs[i], "q_h", s.size());
    double lo = quantile_sorted(sorted, ql);
    double hi = quantile_sorted(sorted, qh);
    if (std::isnan(lo) || std::isnan(hi)) {
      out[i] = kNaN;
      continue;
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t v = 0; v + 1 < s.size(); ++v) {
      bool in = s[v] >= lo && s[v] <= hi && s[v + 1] >= lo && s[v + 1] <= hi;
      if (in) {
        num += std::abs(s[v + 1] - s[v]);
        den += 1.0;
      }
    }
    out[i] = den == 0.0 ? 0.0 : num / den;
  }
}

void eval_mean_autocorrelation(Specs, Series s, std::span<double> out) {
  std::size_t n = s.size();
  double m = mean_of(s);
  double var = var_of(s, m);
  if (n < 2 || var == 0.0) {
    std::fill(out.begin(), out.end(), kNaN);
    return;
  }
  // sum over all lags of sum_nu d_nu d_{nu+l} equals ((sum d)^2 - sum d^2)/2
  double sd = 0.0, sd2 = 0.0;
  for (double v : s) {
    double d = v - m;
    sd += d;
    sd2 += d * d;
  }
  double pairs = 0.5 * (sd * sd - sd2);
  std::fill(out.begin(), out.end(),
            pairs / ((static_cast<double>(n) - 1.0) * var));
}

void eval_mean_second_derivate_central(Specs, Series s, std::span<double> out) {
  std::size_t n = s.size();
  if (n < 3) {
    std::fill(out.begin(), out.end(), kNaN);
    return;
  }
  // 1-based nu = 2 .. n-2
  double acc = 0.0;
  for (std::size_t j = 1; j + 2 < n; ++j)
    acc += 0.5 * (s[j - 1] - 2.0 * s[j] + s[j + 1]);
  std::fill(out.begin(), out.end(), acc / (static_cast<double>(n) - 2.0));
}

void eval_cwt_peaks(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[i] = cwt_peak_count(s, get_iparam(specs[i], "l", s.size()));
}

void eval_number_peaks(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[i] = count_peaks(s, get_iparam(specs[i], "l", s.size()));
}

void eval_welch(Specs specs, Series s, std::span<double> out) {
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[i] = welch_density(s, get_iparam(specs[i], "i", s.size()));
}

void eval_time_reversal(Specs specs, Series s, std::span<double> out) {
  std::size_t n = s.size();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    long long l = get_iparam(specs[i], "l", s.size());
    if (l < 1 || n <= 2 * static_cast<std::size_t>(l)) {
      out[i] = kNaN;
      continue;
    }
    std::size_t lag = static_cast<std::size_t>(l);
    double acc = 0.0;
    for (std::size_t nu = 0; nu + 2 * lag < n; ++nu)
      acc += s[nu + 2 * lag] * s[nu + 2 * lag] * s[nu + lag] -
             s[nu + lag] * s[nu] * s[nu];
    out[i] = acc / static_cast<double>(n - 2 * lag);
  }
}

using FamilyFn = void (*)(Specs, Series, std::span<double>);

const std::unordered_map<std::string_view, FamilyFn>& family_table() {
  static const std::unordered_map<std::string_view, FamilyFn> table = {
      {"maximum", eval_maximum},
      {"minimum", eval_minimum},
      {"mean", eval_mean},
      {"var", eval_var},
      {"std", eval_std},
      {"skewness", eval_skewness},
      {"kurtosis", eval_kurtosis},
      {"length", eval_length},
      {"median", eval_median},
      {"quantile", eval_quantile},
      {"absolute_energy", eval_absolute_energy},
      {"augmented_dickey_fuller_test_statistic", eval_adf},
      {"binned_entropy", eval_binned_entropy},
      {"has_large_standard_deviation", eval_has_large_standard_deviation},
      {"has_variance_larger_than_std", eval_has_variance_larger_than_std},
      {"is_symmetric_looking", eval_is_symmetric_looking},
      {"mass_quantile", eval_mass_quantile},
      {"number_data_points_above_mean", eval_points_above_mean},
      {"number_data_points_above_median", eval_points_above_median},
      {"number_data_points_below_mean", eval_points_below_mean},
      {"number_data_points_below_median", eval_points_below_median},
      {"arima_model_coefficients", eval_arima},
      {"continuous_wavelet_transformation_coefficients",
       eval_cwt_coefficients},
      {"fast_fourier_transformation_coefficient", eval_fft},
      {"first_index_max", eval_first_index_max},
      {"first_index_min", eval_first_index_min},
      {"lagged_autocorrelation", eval_lagged_autocorrelation},
      {"large_number_of_peaks", eval_large_number_of_peaks},
      {"last_index_max", eval_last_index_max},
      {"last_index_min", eval_last_index_min},
      {"longest_strike_above_mean", eval_strike_above_mean},
      {"longest_strike_above_median", eval_strike_above_median},
      {"longest_strike_below_mean", eval_strike_below_mean},
      {"longest_strike_below_median", eval_strike_below_median},
      {"longest_strike_negative", eval_strike_negative},
      {"longest_strike_positive", eval_strike_positive},
      {"longest_strike_zero", eval_strike_zero},
      {"mean_absolute_change", eval_mean_absolute_change},
      {"mean_absolute_change_quantiles", eval_mean_abs_change_quantiles},
      {"mean_autocorrelation", eval_mean_autocorrelation},
      {"mean_second_derivate_central", eval_mean_second_derivate_central},
      {"number_continous_wavelet_transformation_peaks_of_size",
       eval_cwt_peaks},
      {"number_peaks_of_size", eval_number_peaks},
      {"spektral_welch_density", eval_welch},
      {"time_reversal_asymmetry_statistic", eval_time_reversal},
  };
  return table;
}

ParamValue num(double v) { return ParamValue{v, false}; }
ParamValue half() { return ParamValue{0.0, true}; }

}  // namespace

bool is_known_mapping(const std::string& name) {
  return find_catalog_entry(name) != nullptr;
}

std::vector<MappingSpec> default_registry() {
  std::vector<MappingSpec> out;
  auto plain = [&](std::string_view name) {
    out.push_back({std::string(name), {}});
  };
  plain("maximum");
  plain("minimum");
  plain("mean");
  plain("var");
  plain("std");
  plain("skewness");
  plain("kurtosis");
  plain("length");
  plain("median");
  for (int k = 1; k <= 9; ++k)
    out.push_back({"quantile", {{"q", num(k / 10.0)}}});
  plain("absolute_energy");
  plain("augmented_dickey_fuller_test_statistic");
  for (double m : {5.0, 10.0, 100.0})
    out.push_back({"binned_entropy", {{"m", num(m)}}});
  plain("has_large_standard_deviation");
  plain("has_variance_larger_than_std");
  plain("is_symmetric_looking");
  for (int k = 1; k <= 9; ++k)
    out.push_back({"mass_quantile", {{"q", num(k / 10.0)}}});
  plain("number_data_points_above_mean");
  plain("number_data_points_above_median");
  plain("number_data_points_below_mean");
  plain("number_data_points_below_median");
  for (int i = 0; i <= 4; ++i)
    out.push_back(
        {"arima_model_coefficients", {{"i", num(i)}, {"k", num(10.0)}}});
  for (double a : {2.0, 5.0, 10.0, 20.0}) {
    out.push_back({"continuous_wavelet_transformation_coefficients",
                   {{"a", num(a)}, {"b", num(0.0)}}});
    out.push_back({"continuous_wavelet_transformation_coefficients",
                   {{"a", num(a)}, {"b", half()}}});
  }
  for (int k = 0; k <= 18; ++k)
    out.push_back(
        {"fast_fourier_transformation_coefficient", {{"k", num(k)}}});
  plain("first_index_max");
  plain("first_index_min");
  for (int l = 1; l <= 9; ++l)
    out.push_back({"lagged_autocorrelation", {{"l", num(l)}}});
  for (double l : {1.0, 3.0, 5.0})
    out.push_back(
        {"large_number_of_peaks", {{"l", num(l)}, {"m", num(5.0)}}});
  plain("last_index_max");
  plain("last_index_min");
  plain("longest_strike_above_mean");
  plain("longest_strike_above_median");
  plain("longest_strike_below_mean");
  plain("longest_strike_below_median");
  plain("longest_strike_negative");
  plain("longest_strike_positive");
  plain("longest_strike_zero");
  plain("mean_absolute_change");
  out.push_back({"mean_absolute_change_quantiles",
                 {{"q_l", num(0.2)}, {"q_h", num(0.8)}}});
  out.push_back({"mean_absolute_change_quantiles",
                 {{"q_l", num(0.1)}, {"q_h", num(0.9)}}});
  out.push_back({"mean_absolute_change_quantiles",
                 {{"q_l", num(0.25)}, {"q_h", num(0.75)}}});
  plain("mean_autocorrelation");
  plain("mean_second_derivate_central");
  for (double l : {5.0, 10.0})
    out.push_back({"number_continous_wavelet_transformation_peaks_of_size",
                   {{"l", num(l)}}});
  for (double l : {1.0, 3.0, 5.0})
    out.push_back({"number_peaks_of_size", {{"l", num(l)}}});
  for (double i : {2.0, 5.0, 8.0})
    out.push_back({"spektral_welch_density", {{"i", num(i)}}});
  for (double l : {1.0, 2.0, 3.0})
    out.push_back({"time_reversal_asymmetry_statistic", {{"l", num(l)}}});
  return out;
}

std::vector<MappingSpec> registry_from_json(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(ErrorCode::UnparsableValue,
                    std::string("registry config: ") + e.what());
  }
  if (!doc.is_object())
    throw DataError(ErrorCode::UnparsableValue,
                    "registry config: top level must be an object");

  std::vector<MappingSpec> out;
  for (const auto& [name, bindings] : doc.items()) {
    const CatalogEntry* entry = find_catalog_entry(name);
    if (!entry)
      throw DataError(ErrorCode::BadName,
                      "registry config: unknown mapping '" + name + "'");
    if (!bindings.is_array())
      throw DataError(ErrorCode::UnparsableValue,
                      "registry config: '" + name +
                          "' must map to an array of parameter objects");
    for (const auto& binding : bindings) {
      if (!binding.is_object())
        throw DataError(ErrorCode::UnparsableValue,
                        "registry config: '" + name +
                            "' bindings must be objects");
      MappingSpec spec;
      spec.name = name;
      for (std::string_view pname : entry->params) {
        auto it = binding.find(pname);
        if (it == binding.end())
          throw DataError(ErrorCode::BadName,
                          "registry config: '" + name +
                              "' binding is missing parameter '" +
                              std::string(pname) + "'");
        ParamValue pv;
        if (it->is_string() && it->get<std::string>() == "half_length") {
          pv = half();
        } else if (it->is_number()) {
          pv = num(it->get<double>());
        } else {
          throw DataError(ErrorCode::UnparsableValue,
                          "registry config: parameter '" + std::string(pname) +
                              "' of '" + name +
                              "' must be a number or \"half_length\"");
        }
        spec.params.emplace_back(std::string(pname), pv);
      }
      for (const auto& [key, value] : binding.items()) {
        bool known = std::any_of(entry->params.begin(), entry->params.end(),
                                 [&](std::string_view p) { return p == key; });
        if (!known)
          throw DataError(ErrorCode::BadName,
                          "registry config: '" + name +
                              "' has no parameter '" + key + "'");
      }
      out.push_back(std::move(spec));
    }
  }
  return out;
}

std::vector<MappingSpec> load_registry_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(ErrorCode::Io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return registry_from_json(text);
}

ColumnId make_column_id(const std::string& kind, const MappingSpec& spec,
                        std::size_t n_t) {
  ColumnId id;
  id.kind = kind;
  id.mapping = spec.name;
  for (const auto& [pname, pval] : spec.params)
    id.params.emplace_back(pname, resolve(pval, n_t));
  return id;
}

void extract_family(std::span<const MappingSpec> specs,
                    std::span<const double> series, std::span<double> out) {
  if (specs.empty()) return;
  if (out.size() != specs.size())
    throw DataError(ErrorCode::LengthMismatch,
                    "output span does not match the spec run");
  if (series.empty()) {
    std::fill(out.begin(), out.end(), kNaN);
    return;
  }
  auto it = family_table().find(specs.front().name);
  if (it == family_table().end())
    throw DataError(ErrorCode::BadName,
                    "unknown mapping '" + specs.front().name + "'");
  for (const auto& spec : specs)
    if (spec.name != specs.front().name)
      throw DataError(ErrorCode::BadName,
                      "extract_family requires a single mapping name");
  it->second(specs, series, out);
}

double extract_feature(const MappingSpec& spec,
                       std::span<const double> series) {
  double out = kNaN;
  extract_family({&spec, 1}, series, {&out, 1});
  return out;
}

}  // namespace freshx
