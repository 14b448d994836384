#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "semg/core.hpp"
#include "semg/dagostino_table.hpp"

namespace semg {

namespace detail {

inline std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

inline void require_finite_sample(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("sample contains a non-finite value");
  }
}

inline double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// c[0] + c[1] x + c[2] x^2 + ...
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double r = 0.0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shapiro-Wilk

/// Shapiro-Wilk coefficients a_1..a_{n/2} for an ascending sample, via
/// Royston's (1992/1995) polynomial approximation. a_i weights
/// x_(n+1-i) - x_(i).
inline std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
  if (n < 3) throw InputError("Shapiro-Wilk needs n >= 3");
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  static constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = detail::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;

  std::size_t first_scaled = 1;
  double fac = 0.0;
  if (n > 5) {
    first_scaled = 2;
    const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

/// W statistic and Royston's normalizing transformation for the p-value.
inline TestResult shapiro_wilk(std::span<const double> sample, double alpha = 0.05) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw InputError("Shapiro-Wilk needs 3 <= n <= 5000, got n=" + std::to_string(n));
  }
  detail::require_finite_sample(sample);
  const auto x = detail::sorted_copy(sample);
  if (x.back() - x.front() <= 0.0) throw ComputeError("zero variance: Shapiro-Wilk undefined");

  TestResult res;
  res.test = "shapiro-wilk";
  res.n = n;
  res.alpha = alpha;
  if (n < 20) {
    res.warnings.push_back("Shapiro-Wilk with n=" + std::to_string(n) + " < 20 has low power");
  }

  const auto a = shapiro_wilk_coefficients(n);
  // Scale by the range to keep the sums well conditioned.
  const double range = x.back() - x.front();
  double mean = 0.0;
  for (double v : x) mean += v / range;
  mean /= static_cast<double>(n);
  double ssq = 0.0;
  for (double v : x) ssq += (v / range - mean) * (v / range - mean);
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += a[i] * (x[n - 1 - i] - x[i]) / range;
  const double w = std::min(1.0, num * num / ssq);
  res.statistic = w;

  double pw = 1.0;
  const double an = static_cast<double>(n);
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;  // asin(sqrt(3/4))
    pw = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
  } else if (w < 1.0) {
    static constexpr std::array<double, 4> c3{0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};
    static constexpr std::array<double, 2> g{-2.273, 0.459};
    double y = std::log(1.0 - w);
    double mu = 0.0;
    double sigma = 1.0;
    if (n <= 11) {
      const double gamma = detail::poly(g, an);
      if (y >= gamma) {
        pw = 1e-99;
        res.p_value = pw;
        res.reject_null = true;
        return res;
      }
      y = -std::log(gamma - y);
      mu = detail::poly(c3, an);
      sigma = std::exp(detail::poly(c4, an));
    } else {
      const double ln = std::log(an);
      mu = detail::poly(c5, ln);
      sigma = std::exp(detail::poly(c6, ln));
    }
    pw = detail::normal_upper_tail((y - mu) / sigma);
  }
  res.p_value = std::clamp(pw, 0.0, 1.0);
  res.reject_null = *res.p_value < alpha;
  return res;
}

// ---------------------------------------------------------------------------
// D'Agostino D

inline constexpr double kDagostinoExpected = 0.28209479;  // 1 / (2 sqrt(pi))
inline constexpr double kDagostinoScale = 0.02998598;

/// D = sum (i - (n+1)/2) x_(i) / (n^2 sigma_n) with the population standard
/// deviation. The decision uses the embedded two-sided table for alpha 0.05
/// or 0.01; no p-value is reported.
inline TestResult dagostino_d(std::span<const double> sample, double alpha = 0.05) {
  const std::size_t n = sample.size();
  if (n < 10) throw InputError("D'Agostino test needs n >= 10, got n=" + std::to_string(n));
  detail::require_finite_sample(sample);
  const auto x = detail::sorted_copy(sample);
  const double an = static_cast<double>(n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= an;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / an);
  if (!(sigma > 0.0)) throw ComputeError("zero variance: D'Agostino D undefined");

  // Centering first makes D exactly invariant to x -> a x + b up to rounding.
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += (static_cast<double>(i + 1) - (an + 1.0) / 2.0) * (x[i] - mean);
  }
  TestResult res;
  res.test = "dagostino-d";
  res.n = n;
  res.alpha = alpha;
  res.statistic = t / (an * an * sigma);

  const bool alpha05 = std::abs(alpha - 0.05) < 1e-12;
  const bool alpha01 = std::abs(alpha - 0.01) < 1e-12;
  if (!alpha05 && !alpha01) {
    res.warnings.push_back("no D'Agostino critical values for alpha=" + std::to_string(alpha) +
                           " (table covers 0.05 and 0.01)");
    return res;
  }
  const auto& table = tables::kDagostinoTable;
  auto pick = [&](const tables::DagostinoRow& r) {
    return alpha05 ? std::pair{r.y025, r.y975} : std::pair{r.y005, r.y995};
  };
  std::pair<double, double> y;
  if (n >= static_cast<std::size_t>(table.back().n)) {
    y = pick(table.back());
    if (n > static_cast<std::size_t>(table.back().n)) {
      res.warnings.push_back("n beyond the critical table; using the n=" +
                             std::to_string(table.back().n) + " row");
    }
  } else {
    std::size_t hi = 1;
    while (static_cast<std::size_t>(table[hi].n) < n) ++hi;
    const auto& r0 = table[hi - 1];
    const auto& r1 = table[hi];
    const double f = (an - r0.n) / static_cast<double>(r1.n - r0.n);
    const auto y0 = pick(r0);
    const auto y1 = pick(r1);
    y = {y0.first + f * (y1.first - y0.first), y0.second + f * (y1.second - y0.second)};
  }
  const double to_d = kDagostinoScale / std::sqrt(an);
  res.critical_low = kDagostinoExpected + y.first * to_d;
  res.critical_high = kDagostinoExpected + y.second * to_d;
  res.reject_null = res.statistic < *res.critical_low || res.statistic > *res.critical_high;
  return res;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// Asymptotic Kolmogorov critical constant c(alpha) = sqrt(-ln(alpha/2) / 2).
inline double ks_critical_constant(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InputError("alpha must be in (0, 1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

/// Exact supremum distance between two empirical CDFs.
inline double ks_statistic(std::span<const double> s1, std::span<const double> s2) {
  if (s1.empty() || s2.empty()) throw InputError("KS test needs non-empty samples");
  const auto a = detail::sorted_copy(s1);
  const auto b = detail::sorted_copy(s2);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return d;
}

/// Two-sample test; rejects when KS exceeds c(alpha) sqrt((n1+n2)/(n1 n2)).
inline TestResult ks_test(std::span<const double> s1, std::span<const double> s2,
                          double alpha = 0.05) {
  detail::require_finite_sample(s1);
  detail::require_finite_sample(s2);
  TestResult res;
  res.test = "kolmogorov-smirnov";
  res.n = s1.size() + s2.size();
  res.alpha = alpha;
  res.statistic = ks_statistic(s1, s2);
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  res.critical_high = ks_critical_constant(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
  res.reject_null = res.statistic > *res.critical_high;
  return res;
}

/// One-sample test against a continuous reference CDF.
inline TestResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf,
                          double alpha = 0.05) {
  if (sample.empty()) throw InputError("KS test needs a non-empty sample");
  detail::require_finite_sample(sample);
  const auto x = detail::sorted_copy(sample);
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  TestResult res;
  res.test = "kolmogorov-smirnov";
  res.n = x.size();
  res.alpha = alpha;
  res.statistic = d;
  res.critical_high = ks_critical_constant(alpha) / std::sqrt(n);
  res.reject_null = res.statistic > *res.critical_high;
  return res;
}

// ---------------------------------------------------------------------------
// Distribution summaries

struct FiveNumberSummary {
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
  double iqr = 0.0;
  double lower_fence = 0.0, upper_fence = 0.0;
  std::vector<double> outliers;
};

/// Quantile by linear interpolation between order statistics at 1 + (n-1) p.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Box-plot geometry: quartiles, whiskers at the most extreme values within
/// 1.5 IQR (never inside the box), and the points beyond the fences.
inline FiveNumberSummary quartile_summary(std::span<const double> sample) {
  if (sample.empty()) throw InputError("quartile summary of an empty sample");
  detail::require_finite_sample(sample);
  const auto x = detail::sorted_copy(sample);
  FiveNumberSummary s;
  s.q1 = quantile_sorted(x, 0.25);
  s.q2 = quantile_sorted(x, 0.5);
  s.q3 = quantile_sorted(x, 0.75);
  s.iqr = s.q3 - s.q1;
  s.lower_fence = s.q1 - 1.5 * s.iqr;
  s.upper_fence = s.q3 + 1.5 * s.iqr;
  s.q0 = s.q1;
  s.q4 = s.q3;
  for (double v : x) {
    if (v < s.lower_fence || v > s.upper_fence) {
      s.outliers.push_back(v);
    } else {
      s.q0 = std::min(s.q0, v);
      s.q4 = std::max(s.q4, v);
    }
  }
  return s;
}

struct HistogramSummary {
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

/// Uniform bins over [min, max]; the last bin includes its right edge. A
/// constant sample gets unit-width bins starting half a unit below it.
inline HistogramSummary histogram(std::span<const double> sample, std::size_t bins) {
  if (sample.empty()) throw InputError("histogram of an empty sample");
  if (bins < 1) throw InputError("histogram needs at least one bin");
  detail::require_finite_sample(sample);
  const auto [mn_it, mx_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *mn_it;
  double hi = *mx_it;
  if (hi <= lo) {
    lo -= 0.5;
    hi = lo + static_cast<double>(bins);
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  HistogramSummary h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : sample) {
    auto k = static_cast<std::size_t>((v - lo) / width);
    if (k >= bins) k = bins - 1;
    ++h.counts[k];
  }
  h.total = sample.size();
  return h;
}

// ---------------------------------------------------------------------------
// Test routing

struct NormalityReport {
  std::string decided_by;  // name of the test whose decision is authoritative, or empty
  std::string reason;
  std::vector<TestResult> results;
};

inline constexpr std::size_t kShapiroWilkMaxN = 50;
inline constexpr std::size_t kSmallSampleN = 20;

/// Shapiro-Wilk for 3 <= n <= 50, D'Agostino above 50. Below 20 samples a
/// one-sample KS against a normal with the sample's mean and standard
/// deviation is reported alongside.
inline NormalityReport choose_test(std::span<const double> sample, double alpha = 0.05) {
  if (sample.empty()) throw InputError("normality routing needs at least one value");
  detail::require_finite_sample(sample);
  NormalityReport rep;
  const std::size_t n = sample.size();

  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) {
    rep.reason = "zero variance; normality tests are undefined";
    return rep;
  }

  if (n >= 3 && n <= kShapiroWilkMaxN) {
    rep.results.push_back(shapiro_wilk(sample, alpha));
    rep.decided_by = "shapiro-wilk";
    rep.reason = "n=" + std::to_string(n) + " in [3, 50]: Shapiro-Wilk";
  } else if (n > kShapiroWilkMaxN) {
    rep.results.push_back(dagostino_d(sample, alpha));
    rep.decided_by = "dagostino-d";
    rep.reason = "n=" + std::to_string(n) + " > 50: D'Agostino D";
  } else {
    rep.reason = "n=" + std::to_string(n) + " < 3: only the KS goodness-of-fit check applies";
  }

  if (n < kSmallSampleN) {
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (sd > 0.0) {
      auto ks = ks_test(
          sample, [mean, sd](double v) { return 0.5 * std::erfc(-(v - mean) / (sd * std::numbers::sqrt2)); },
          alpha);
      ks.warnings.push_back("normal parameters estimated from the sample; KS is conservative");
      rep.results.push_back(std::move(ks));
      if (rep.decided_by.empty()) rep.decided_by = "kolmogorov-smirnov";
      rep.reason += "; n < 20: KS against a fitted normal reported as small-sample fallback";
    }
  }
  return rep;
}

}  // namespace semg
