#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

namespace oracle {
namespace {

const double NAN_VALUE = std::nan("");
const double PI = std::acos(-1.0);

double param(const std::vector<std::pair<std::string, double>>& params,
             const std::string& name) {
  for (const auto& kv : params)
    if (kv.first == name) return kv.second;
  throw std::runtime_error("oracle: missing parameter " + name);
}

double o_mean(const std::vector<double>& s) {
  double total = 0.0;
  for (double v : s) total += v;
  return total / double(s.size());
}

double o_var(const std::vector<double>& s) {
  double mu = o_mean(s);
  double total = 0.0;
  for (double v : s) total += (v - mu) * (v - mu);
  return total / double(s.size());
}

double o_max(const std::vector<double>& s) {
  double best = s[0];
  for (double v : s)
    if (v > best) best = v;
  return best;
}

double o_min(const std::vector<double>& s) {
  double best = s[0];
  for (double v : s)
    if (v < best) best = v;
  return best;
}

double o_median(const std::vector<double>& s) {
  std::vector<double> t = s;
  std::sort(t.begin(), t.end());
  std::size_t n = t.size();
  if (n % 2 == 1) return t[(n - 1) / 2];
  return (t[n / 2 - 1] + t[n / 2]) / 2.0;
}

// smallest sorted value whose rank k fulfils k/n >= q
double o_quantile(const std::vector<double>& s, double q) {
  if (!(q > 0.0) || q > 1.0) return NAN_VALUE;
  std::vector<double> t = s;
  std::sort(t.begin(), t.end());
  std::size_t n = t.size();
  for (std::size_t k = 1; k <= n; ++k)
    if (double(k) / double(n) >= q) return t[k - 1];
  return t[n - 1];
}

double o_skewness(const std::vector<double>& s) {
  double n = double(s.size());
  if (s.size() < 3) return NAN_VALUE;
  double mu = o_mean(s);
  double m2 = 0.0, m3 = 0.0;
  for (double v : s) {
    m2 += (v - mu) * (v - mu);
    m3 += (v - mu) * (v - mu) * (v - mu);
  }
  double num = m3 / n;
  double den = std::pow(m2 / (n - 1.0), 1.5);
  double value = n * n / ((n - 1.0) * (n - 2.0)) * num / den;
  return std::isfinite(value) ? value : NAN_VALUE;
}

double o_kurtosis(const std::vector<double>& s) {
  double n = double(s.size());
  double mu = o_mean(s);
  double sd = std::sqrt(o_var(s));
  if (sd == 0.0) return NAN_VALUE;
  double total = 0.0;
  for (double v : s) {
    double z = (v - mu) / sd;
    total += z * z * z * z;
  }
  double value = total / n - 3.0;
  return std::isfinite(value) ? value : NAN_VALUE;
}

// Gauss-Jordan solve of a dense linear system; false when singular.
bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> rhs,
                 std::vector<double>& x) {
  std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-11) return false;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double factor = a[r][col] / a[col][col];
      for (std::size_t cc = col; cc < n; ++cc) a[r][cc] -= factor * a[col][cc];
      rhs[r] -= factor * rhs[col];
    }
  }
  x.resize(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = rhs[r] / a[r][r];
  return true;
}

// Gauss-Jordan inverse; false when singular.
bool gauss_invert(std::vector<std::vector<double>> a,
                  std::vector<std::vector<double>>& inv) {
  std::size_t n = a.size();
  inv.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (std::fabs(a[pivot][col]) < 1e-11) return false;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    double scale = a[col][col];
    for (std::size_t cc = 0; cc < n; ++cc) {
      a[col][cc] /= scale;
      inv[col][cc] /= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double factor = a[r][col];
      for (std::size_t cc = 0; cc < n; ++cc) {
        a[r][cc] -= factor * a[col][cc];
        inv[r][cc] -= factor * inv[col][cc];
      }
    }
  }
  return true;
}

// ordinary least squares through explicit normal equations
bool least_squares(const std::vector<std::vector<double>>& design,
                   const std::vector<double>& y, std::vector<double>& beta) {
  std::size_t rows = design.size();
  std::size_t cols = design[0].size();
  std::vector<std::vector<double>> gram(cols, std::vector<double>(cols, 0.0));
  std::vector<double> moment(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      moment[i] += design[r][i] * y[r];
      for (std::size_t j = 0; j < cols; ++j)
        gram[i][j] += design[r][i] * design[r][j];
    }
  }
  return gauss_solve(gram, moment, beta);
}

// t-statistic of the level coefficient in the unit-root regression
double o_adf(const std::vector<double>& s) {
  std::size_t n = s.size();
  if (n < 2) return NAN_VALUE;
  std::size_t p = std::size_t(std::floor(std::cbrt(double(n - 1)) + 1e-12));
  if (p < 1) p = 1;
  if (n < p + 2) return NAN_VALUE;
  std::size_t rows = n - p - 1;
  std::size_t cols = p + 2;
  if (rows <= cols) return NAN_VALUE;

  std::vector<std::vector<double>> design(rows, std::vector<double>(cols));
  std::vector<double> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t nu = p + 2 + r;  // 1-based row index
    y[r] = s[nu - 1] - s[nu - 2];
    design[r][0] = 1.0;
    design[r][1] = s[nu - 2];
    for (std::size_t j = 1; j <= p; ++j)
      design[r][1 + j] = s[nu - j - 1] - s[nu - j - 2];
  }

  std::vector<double> beta;
  if (!least_squares(design, y, beta)) return NAN_VALUE;

  double rss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double fit = 0.0;
    for (std::size_t c = 0; c < cols; ++c) fit += design[r][c] * beta[c];
    rss += (y[r] - fit) * (y[r] - fit);
  }
  double sigma2 = rss / double(rows - cols);

  std::vector<std::vector<double>> gram(cols, std::vector<double>(cols, 0.0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        gram[i][j] += design[r][i] * design[r][j];
  std::vector<std::vector<double>> inv;
  if (!gauss_invert(gram, inv)) return NAN_VALUE;
  double v = sigma2 * inv[1][1];
  if (!(v > 0.0) || !std::isfinite(v)) return NAN_VALUE;
  return beta[1] / std::sqrt(v);
}

double o_binned_entropy(const std::vector<double>& s, double m_bins) {
  long long bins = llround(m_bins);
  if (bins < 1) return NAN_VALUE;
  double lo = o_min(s), hi = o_max(s);
  if (hi == lo) return 0.0;
  std::vector<long long> counts(std::size_t(bins), 0);
  for (double v : s) {
    long long k = (long long)((v - lo) / (hi - lo) * double(bins));
    if (k > bins - 1) k = bins - 1;
    counts[std::size_t(k)] += 1;
  }
  double total = 0.0;
  for (long long c : counts) {
    if (c == 0) continue;
    double pk = double(c) / double(s.size());
    total += pk * std::log(pk);
  }
  return total;
}

double o_mass_quantile(const std::vector<double>& s, double q) {
  double mu = o_mean(s);
  if (mu == 0.0) return NAN_VALUE;
  double running = 0.0;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    running += s[k - 1];
    if (running / mu >= q) return double(k) / double(s.size());
  }
  return NAN_VALUE;
}

double o_arima(const std::vector<double>& s, double i_in, double k_in) {
  long long k = llround(k_in);
  long long ci = llround(i_in);
  if (k < 1) return NAN_VALUE;
  std::size_t n = s.size();
  if (n < std::size_t(k) + 1) return NAN_VALUE;
  std::size_t rows = n - std::size_t(k);
  std::size_t cols = std::size_t(k) + 1;
  if (rows < cols) return NAN_VALUE;
  std::vector<std::vector<double>> design(rows, std::vector<double>(cols));
  std::vector<double> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t nu = std::size_t(k) + 1 + r;  // 1-based
    y[r] = s[nu - 1];
    design[r][0] = 1.0;
    for (long long j = 1; j <= k; ++j)
      design[r][std::size_t(j)] = s[nu - 1 - std::size_t(j)];
  }
  std::vector<double> beta;
  if (!least_squares(design, y, beta)) return NAN_VALUE;
  if (ci < 0 || ci > k) return NAN_VALUE;
  return beta[std::size_t(ci)];
}

// Ricker wavelet value, transcribed term by term
double o_wavelet(double nu, double a, double b) {
  double factor = 2.0 / (std::sqrt(3.0 * a) * std::pow(PI, 0.25));
  double shape = 1.0 - ((nu - b) / a) * ((nu - b) / a);
  double decay = std::exp(-((nu - b) * (nu - b)) / (2.0 * a * a));
  return factor * shape * decay;
}

double o_cwt(const std::vector<double>& s, double a, double b) {
  if (!(a > 0.0)) return NAN_VALUE;
  double total = 0.0;
  for (std::size_t nu = 1; nu <= s.size(); ++nu)
    total += s[nu - 1] * o_wavelet(double(nu), a, b);
  return total;
}

double o_fft(const std::vector<double>& s, double k_in) {
  long long k = llround(k_in);
  if (k < 0) return NAN_VALUE;
  double n = double(s.size());
  double total = 0.0;
  for (std::size_t nu = 1; nu <= s.size(); ++nu)
    total += s[nu - 1] * std::cos(2.0 * PI * double(k) * double(nu - 1) / n);
  return total;
}

double o_lagged_autocorrelation(const std::vector<double>& s, double l_in) {
  long long l = llround(l_in);
  if (l < 1) return NAN_VALUE;
  double mu = o_mean(s);
  double variance = o_var(s);
  if (variance == 0.0) return NAN_VALUE;
  double total = 0.0;
  std::size_t n = s.size();
  for (std::size_t nu = 1; nu + std::size_t(l) <= n; ++nu)
    total += (s[nu - 1] - mu) * (s[nu - 1 + std::size_t(l)] - mu);
  return total / variance;
}

double o_number_peaks(const std::vector<double>& s, double l_in) {
  long long l = llround(l_in);
  if (l < 1) return NAN_VALUE;
  long long n = (long long)(s.size());
  long long count = 0;
  for (long long i = l; i <= n - 1 - l; ++i) {
    bool peak = true;
    for (long long d = 1; d <= l; ++d) {
      if (!(s[std::size_t(i)] > s[std::size_t(i - d)] &&
            s[std::size_t(i)] > s[std::size_t(i + d)])) {
        peak = false;
        break;
      }
    }
    if (peak) count += 1;
  }
  return double(count);
}

template <class Keep>
double o_longest_run(const std::vector<double>& s, Keep keep) {
  std::size_t best = 0, current = 0;
  for (double v : s) {
    if (keep(v)) {
      current += 1;
      if (current > best) best = current;
    } else {
      current = 0;
    }
  }
  return double(best);
}

double o_mean_autocorrelation(const std::vector<double>& s) {
  std::size_t n = s.size();
  double variance = o_var(s);
  if (n < 2 || variance == 0.0) return NAN_VALUE;
  double mu = o_mean(s);
  double total = 0.0;
  for (std::size_t l = 1; l <= n; ++l)
    for (std::size_t nu = 1; nu + l <= n; ++nu)
      total += (s[nu - 1] - mu) * (s[nu - 1 + l] - mu);
  return total / ((double(n) - 1.0) * variance);
}

double o_mean_abs_change_quantiles(const std::vector<double>& s, double ql,
                                   double qh) {
  double lo = o_quantile(s, ql);
  double hi = o_quantile(s, qh);
  if (std::isnan(lo) || std::isnan(hi)) return NAN_VALUE;
  double total = 0.0;
  long long count = 0;
  for (std::size_t nu = 1; nu + 1 <= s.size(); ++nu) {
    double first = s[nu - 1], second = s[nu];
    if (first >= lo && first <= hi && second >= lo && second <= hi) {
      total += std::fabs(second - first);
      count += 1;
    }
  }
  if (count == 0) return 0.0;
  return total / double(count);
}

double o_welch(const std::vector<double>& s, double i_in) {
  long long i = llround(i_in);
  std::size_t n = s.size();
  if (n == 0 || i < 0) return NAN_VALUE;
  std::size_t seg = std::min<std::size_t>(256, n);
  if (std::size_t(i) > seg / 2) return NAN_VALUE;

  std::vector<double> window(seg);
  double energy = 0.0;
  for (std::size_t j = 0; j < seg; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * PI * double(j) / double(seg));
    energy += window[j] * window[j];
  }
  if (!(energy > 0.0)) return NAN_VALUE;

  std::size_t hop = seg - seg / 2;
  double power = 0.0;
  std::size_t segments = 0;
  for (std::size_t start = 0; start + seg <= n; start += hop) {
    double mu = 0.0;
    for (std::size_t j = 0; j < seg; ++j) mu += s[start + j];
    mu /= double(seg);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < seg; ++j) {
      double v = (s[start + j] - mu) * window[j];
      double angle = 2.0 * PI * double(i) * double(j) / double(seg);
      re += v * std::cos(angle);
      im -= v * std::sin(angle);
    }
    power += re * re + im * im;
    segments += 1;
  }
  power /= double(segments) * energy;
  if (i != 0 && !(seg % 2 == 0 && std::size_t(i) == seg / 2)) power *= 2.0;
  return power;
}

double o_time_reversal(const std::vector<double>& s, double l_in) {
  long long l = llround(l_in);
  if (l < 1) return NAN_VALUE;
  std::size_t n = s.size();
  if (n <= 2 * std::size_t(l)) return NAN_VALUE;
  double total = 0.0;
  for (std::size_t nu = 1; nu + 2 * std::size_t(l) <= n; ++nu) {
    double low = s[nu - 1];
    double mid = s[nu - 1 + std::size_t(l)];
    double high = s[nu - 1 + 2 * std::size_t(l)];
    total += high * high * mid - mid * low * low;
  }
  return total / double(n - 2 * std::size_t(l));
}

// Ridge-line peak count over full-support wavelet rows.
double o_cwt_peaks(const std::vector<double>& s, double l_in) {
  long long l = llround(l_in);
  if (l < 1) return NAN_VALUE;
  std::size_t n = s.size();
  if (n == 0) return NAN_VALUE;
  std::size_t widths = std::size_t(l);

  std::vector<std::vector<double>> grid(widths, std::vector<double>(n));
  for (std::size_t a = 1; a <= widths; ++a)
    for (std::size_t b = 1; b <= n; ++b) {
      double total = 0.0;
      for (std::size_t nu = 1; nu <= n; ++nu)
        total += s[nu - 1] * o_wavelet(double(nu), double(a), double(b));
      grid[a - 1][b - 1] = total;
    }

  auto row_maxima = [&](std::size_t a) {
    std::vector<std::size_t> maxima;
    for (std::size_t b = 1; b <= n; ++b) {
      double v = std::fabs(grid[a - 1][b - 1]);
      bool left_ok = b == 1 || v > std::fabs(grid[a - 1][b - 2]);
      bool right_ok = b == n || v > std::fabs(grid[a - 1][b]);
      if (left_ok && right_ok) maxima.push_back(b);
    }
    return maxima;
  };

  // ridge state: current position, spanned widths, smallest width + its
  // position, whether the current row extended it
  struct Line {
    std::size_t pos;
    std::size_t span;
    std::size_t bottom_width;
    std::size_t bottom_pos;
    bool taken;
  };
  std::vector<Line> open;
  std::vector<Line> closed;
  for (std::size_t p : row_maxima(widths))
    open.push_back({p, 1, widths, p, false});

  for (std::size_t a = widths; a-- >= 2;) {
    std::size_t reach = (a + 3) / 4;
    for (Line& line : open) line.taken = false;
    std::vector<Line> survivors;
    for (std::size_t p : row_maxima(a)) {
      long long best = -1;
      for (std::size_t idx = 0; idx < open.size(); ++idx) {
        if (open[idx].taken) continue;
        std::size_t gap = open[idx].pos > p ? open[idx].pos - p
                                            : p - open[idx].pos;
        if (gap > reach) continue;
        if (best < 0) {
          best = (long long)(idx);
          continue;
        }
        std::size_t best_gap = open[std::size_t(best)].pos > p
                                   ? open[std::size_t(best)].pos - p
                                   : p - open[std::size_t(best)].pos;
        if (gap < best_gap ||
            (gap == best_gap &&
             open[idx].pos < open[std::size_t(best)].pos))
          best = (long long)(idx);
      }
      if (best >= 0) {
        Line& line = open[std::size_t(best)];
        line.taken = true;
        line.pos = p;
        line.span += 1;
        line.bottom_width = a;
        line.bottom_pos = p;
      } else {
        survivors.push_back({p, 1, a, p, true});
      }
    }
    for (Line& line : open) {
      if (line.taken)
        survivors.push_back(line);
      else
        closed.push_back(line);
    }
    open = survivors;
  }
  for (Line& line : open) closed.push_back(line);

  std::size_t span_needed = std::size_t((l + 3) / 4);
  long long count = 0;
  for (const Line& line : closed) {
    if (line.span < span_needed) continue;
    double signal = std::fabs(grid[line.bottom_width - 1][line.bottom_pos - 1]);
    std::vector<double> neighborhood;
    for (std::size_t b = 1; b <= n; ++b) {
      long long distance = (long long)(b) - (long long)(line.bottom_pos);
      if (distance < 0) distance = -distance;
      if (distance <= l) neighborhood.push_back(std::fabs(grid[0][b - 1]));
    }
    std::sort(neighborhood.begin(), neighborhood.end());
    std::size_t rank =
        std::size_t(std::ceil(0.1 * double(neighborhood.size())));
    if (rank < 1) rank = 1;
    double noise = neighborhood[rank - 1];
    bool keep = noise == 0.0 ? signal > 0.0 : signal >= 3.0 * noise;
    if (keep) count += 1;
  }
  return double(count);
}

}  // namespace

double feature(const std::string& name,
               const std::vector<std::pair<std::string, double>>& params,
               const std::vector<double>& s) {
  if (s.empty()) return NAN_VALUE;
  double n = double(s.size());

  if (name == "maximum") return o_max(s);
  if (name == "minimum") return o_min(s);
  if (name == "mean") return o_mean(s);
  if (name == "var") return o_var(s);
  if (name == "std") return std::sqrt(o_var(s));
  if (name == "skewness") return o_skewness(s);
  if (name == "kurtosis") return o_kurtosis(s);
  if (name == "length") return n;
  if (name == "median") return o_median(s);
  if (name == "quantile") return o_quantile(s, param(params, "q"));
  if (name == "absolute_energy") {
    double total = 0.0;
    for (double v : s) total += v * v;
    return total;
  }
  if (name == "augmented_dickey_fuller_test_statistic") return o_adf(s);
  if (name == "binned_entropy")
    return o_binned_entropy(s, param(params, "m"));
  if (name == "has_large_standard_deviation")
    return std::sqrt(o_var(s)) > (o_max(s) - o_min(s)) / 2.0 ? 1.0 : 0.0;
  if (name == "has_variance_larger_than_std")
    return o_var(s) > std::sqrt(o_var(s)) ? 1.0 : 0.0;
  if (name == "is_symmetric_looking")
    return std::fabs(o_mean(s) - o_median(s)) < (o_max(s) - o_min(s)) / 2.0
               ? 1.0
               : 0.0;
  if (name == "mass_quantile") return o_mass_quantile(s, param(params, "q"));
  if (name == "number_data_points_above_mean") {
    double mu = o_mean(s);
    long long count = 0;
    for (double v : s)
      if (v > mu) count += 1;
    return double(count);
  }
  if (name == "number_data_points_above_median") {
    double med = o_median(s);
    long long count = 0;
    for (double v : s)
      if (v > med) count += 1;
    return double(count);
  }
  if (name == "number_data_points_below_mean") {
    double mu = o_mean(s);
    long long count = 0;
    for (double v : s)
      if (v < mu) count += 1;
    return double(count);
  }
  if (name == "number_data_points_below_median") {
    double med = o_median(s);
    long long count = 0;
    for (double v : s)
      if (v < med) count += 1;
    return double(count);
  }
  if (name == "arima_model_coefficients")
    return o_arima(s, param(params, "i"), param(params, "k"));
  if (name == "continuous_wavelet_transformation_coefficients")
    return o_cwt(s, param(params, "a"), param(params, "b"));
  if (name == "fast_fourier_transformation_coefficient")
    return o_fft(s, param(params, "k"));
  if (name == "first_index_max") {
    for (std::size_t nu = 1; nu <= s.size(); ++nu)
      if (s[nu - 1] == o_max(s)) return double(nu) / n;
  }
  if (name == "first_index_min") {
    for (std::size_t nu = 1; nu <= s.size(); ++nu)
      if (s[nu - 1] == o_min(s)) return double(nu) / n;
  }
  if (name == "last_index_max") {
    for (std::size_t nu = s.size(); nu >= 1; --nu)
      if (s[nu - 1] == o_max(s)) return double(nu) / n;
  }
  if (name == "last_index_min") {
    for (std::size_t nu = s.size(); nu >= 1; --nu)
      if (s[nu - 1] == o_min(s)) return double(nu) / n;
  }
  if (name == "lagged_autocorrelation")
    return o_lagged_autocorrelation(s, param(params, "l"));
  if (name == "large_number_of_peaks") {
    double peaks = o_number_peaks(s, param(params, "l"));
    if (std::isnan(peaks)) return NAN_VALUE;
    return peaks > param(params, "m") ? 1.0 : 0.0;
  }
  if (name == "longest_strike_above_mean") {
    double mu = o_mean(s);
    return o_longest_run(s, [mu](double v) { return v >= mu; });
  }
  if (name == "longest_strike_above_median") {
    double med = o_median(s);
    return o_longest_run(s, [med](double v) { return v >= med; });
  }
  if (name == "longest_strike_below_mean") {
    double mu = o_mean(s);
    return o_longest_run(s, [mu](double v) { return v <= mu; });
  }
  if (name == "longest_strike_below_median") {
    double med = o_median(s);
    return o_longest_run(s, [med](double v) { return v <= med; });
  }
  if (name == "longest_strike_negative")
    return o_longest_run(s, [](double v) { return v < 0.0; });
  if (name == "longest_strike_positive")
    return o_longest_run(s, [](double v) { return v > 0.0; });
  if (name == "longest_strike_zero")
    return o_longest_run(s, [](double v) { return v == 0.0; });
  if (name == "mean_absolute_change") {
    double total = 0.0;
    for (std::size_t nu = 1; nu + 1 <= s.size(); ++nu)
      total += std::fabs(s[nu] - s[nu - 1]);
    return total / n;
  }
  if (name == "mean_absolute_change_quantiles")
    return o_mean_abs_change_quantiles(s, param(params, "q_l"),
                                       param(params, "q_h"));
  if (name == "mean_autocorrelation") return o_mean_autocorrelation(s);
  if (name == "mean_second_derivate_central") {
    if (s.size() < 3) return NAN_VALUE;
    double total = 0.0;
    for (std::size_t nu = 2; nu + 2 <= s.size(); ++nu)
      total += (s[nu - 2] - 2.0 * s[nu - 1] + s[nu]) / 2.0;
    return total / (n - 2.0);
  }
  if (name == "number_continous_wavelet_transformation_peaks_of_size")
    return o_cwt_peaks(s, param(params, "l"));
  if (name == "number_peaks_of_size")
    return o_number_peaks(s, param(params, "l"));
  if (name == "spektral_welch_density")
    return o_welch(s, param(params, "i"));
  if (name == "time_reversal_asymmetry_statistic")
    return o_time_reversal(s, param(params, "l"));
  throw std::runtime_error("oracle: unknown mapping " + name);
}

double fisher_p(std::int64_t a, std::int64_t b, std::int64_t c,
                std::int64_t d) {
  std::int64_t r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) return 1.0;

  std::int64_t size = r1 + r2;
  std::vector<std::vector<std::int64_t>> choose(
      std::size_t(size) + 1, std::vector<std::int64_t>(std::size_t(size) + 1, 0));
  for (std::size_t row = 0; row <= std::size_t(size); ++row) {
    choose[row][0] = 1;
    for (std::size_t col = 1; col <= row; ++col)
      choose[row][col] =
          choose[row - 1][col - 1] + (col <= row - 1 ? choose[row - 1][col] : 0);
  }
  auto weight = [&](std::int64_t k) -> std::int64_t {
    if (k < 0 || k > r1 || c1 - k < 0 || c1 - k > r2) return 0;
    return choose[std::size_t(r1)][std::size_t(k)] *
           choose[std::size_t(r2)][std::size_t(c1 - k)];
  };

  double observed = double(weight(a));
  double cutoff = observed * (1.0 + 1e-12);
  std::int64_t kept = 0;
  for (std::int64_t k = 0; k <= c1; ++k) {
    std::int64_t w = weight(k);
    if (w > 0 && double(w) <= cutoff) kept += w;
  }
  double p = double(kept) / double(choose[std::size_t(size)][std::size_t(c1)]);
  return p > 1.0 ? 1.0 : p;
}

double ks_d(const std::vector<double>& a, const std::vector<double>& b) {
  std::int64_t na = std::int64_t(a.size());
  std::int64_t nb = std::int64_t(b.size());
  std::vector<double> points = a;
  points.insert(points.end(), b.begin(), b.end());
  std::int64_t best = 0;
  for (double z : points) {
    std::int64_t below_a = 0, below_b = 0;
    for (double v : a)
      if (v <= z) below_a += 1;
    for (double v : b)
      if (v <= z) below_b += 1;
    std::int64_t gap = below_a * nb - below_b * na;
    if (gap < 0) gap = -gap;
    if (gap > best) best = gap;
  }
  return double(best) / (double(na) * double(nb));
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t m = x.size();
  double concordant = 0.0, discordant = 0.0;
  double ties_x = 0.0, ties_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (x[i] == x[j]) ties_x += 1.0;
      if (y[i] == y[j]) ties_y += 1.0;
      double sign = (x[i] - x[j]) * (y[i] - y[j]);
      if (x[i] != x[j] && y[i] != y[j]) {
        if (sign > 0.0)
          concordant += 1.0;
        else
          discordant += 1.0;
      }
    }
  }
  double pairs = double(m) * double(m - 1) / 2.0;
  return (concordant - discordant) /
         std::sqrt((pairs - ties_x) * (pairs - ties_y));
}

std::vector<char> by_mask(const std::vector<double>& p, double q,
                          bool paper_literal) {
  std::size_t n = p.size();
  std::vector<std::size_t> ranked(n);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t l, std::size_t r) {
    if (p[l] != p[r]) return p[l] < p[r];
    return l < r;
  });

  double full = 0.0;
  for (std::size_t mu = 1; mu <= n; ++mu) full += 1.0 / double(mu);

  std::size_t cut = 0;
  double partial = 0.0;
  std::vector<double> lines(n);
  for (std::size_t k = 1; k <= n; ++k) {
    partial += 1.0 / double(k);
    double constant = paper_literal ? partial : full;
    lines[k - 1] = double(k) * q / (double(n) * constant);
  }
  for (std::size_t k = n; k >= 1; --k) {
    if (p[ranked[k - 1]] <= lines[k - 1]) {
      cut = k;
      break;
    }
  }
  std::vector<char> mask(n, 0);
  for (std::size_t k = 1; k <= cut; ++k) mask[ranked[k - 1]] = 1;
  return mask;
}

}  // namespace oracle
