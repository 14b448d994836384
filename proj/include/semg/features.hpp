#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "semg/core.hpp"
#include "semg/spectral.hpp"

namespace semg {

/// Root mean square amplitude.
inline double rms(std::span<const double> x) {
  if (x.empty()) throw InputError("rms of an empty epoch");
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

/// Average rectified value (mean absolute amplitude).
inline double arv(std::span<const double> x) {
  if (x.empty()) throw InputError("arv of an empty epoch");
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s / static_cast<double>(x.size());
}

/// Sign changes between neighbouring samples whose step is at least
/// `threshold` (mV). A sample of exactly zero counts as positive.
inline std::size_t zero_crossings(std::span<const double> x, double threshold = 0.0) {
  if (!(threshold >= 0.0)) throw InputError("zero-crossing threshold must be >= 0");
  std::size_t count = 0;
  for (std::size_t n = 0; n + 1 < x.size(); ++n) {
    const bool pos_now = x[n] >= 0.0;
    const bool pos_next = x[n + 1] >= 0.0;
    if (pos_now != pos_next && std::abs(x[n] - x[n + 1]) >= threshold) ++count;
  }
  return count;
}

inline double rms(const Epoch& e) { return rms(e.samples); }
inline double arv(const Epoch& e) { return arv(e.samples); }
inline std::size_t zero_crossings(const Epoch& e, double threshold = 0.0) {
  return zero_crossings(e.samples, threshold);
}

namespace detail {

inline double require_power(const PowerSpectrum& spec) {
  double total = 0.0;
  for (double p : spec.density()) total += p;
  if (!(total > 0.0)) throw ComputeError("spectrum has zero total power");
  return total;
}

}  // namespace detail

/// Spectral centroid sum(f P) / sum(P).
inline double mean_frequency(const PowerSpectrum& spec) {
  const double total = detail::require_power(spec);
  const auto f = spec.freqs();
  const auto p = spec.density();
  double moment = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) moment += f[k] * p[k];
  return moment / total;
}

/// Half-power frequency. Bin k carries P[k]*df spread uniformly over
/// [f_k - df/2, f_k + df/2]; the crossing is interpolated inside that bin and
/// clamped to the grid.
inline double median_frequency(const PowerSpectrum& spec) {
  const double total = detail::require_power(spec);
  const auto f = spec.freqs();
  const auto p = spec.density();
  const double half = 0.5 * total;
  const double df = spec.df();
  double cum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (cum + p[k] >= half && p[k] > 0.0) {
      const double mdf = f[k] - 0.5 * df + df * (half - cum) / p[k];
      return std::clamp(mdf, f.front(), f.back());
    }
    cum += p[k];
  }
  return f.back();
}

struct FeatureConfig {
  double zc_threshold_mv = 0.01;
  SpectralConfig spectral{};
};

/// One row per epoch; MNF and MDF come from each epoch's periodogram.
inline FeatureTable feature_table(const EpochSeries& series, const FeatureConfig& cfg = {}) {
  if (series.empty()) throw InputError("feature table needs at least one epoch");
  FeatureTable t;
  t.label = series.label;
  t.fs = series.fs;
  for (const auto& e : series.epochs) {
    const PowerSpectrum psd = periodogram(e, cfg.spectral);
    double mnf = 0.0;
    double mdf = 0.0;
    try {
      mnf = mean_frequency(psd);
      mdf = median_frequency(psd);
    } catch (const ComputeError&) {
      throw ComputeError("channel '" + series.label + "': epoch at " +
                         std::to_string(e.start_time()) + " s has zero spectral power");
    }
    t.time.push_back(e.start_time());
    t.rms.push_back(rms(e));
    t.arv.push_back(arv(e));
    t.zc.push_back(zero_crossings(e, cfg.zc_threshold_mv));
    t.mnf.push_back(mnf);
    t.mdf.push_back(mdf);
  }
  return t;
}

struct TrendResult {
  double slope = 0.0;      // units per second
  double intercept = 0.0;  // units
  double r = 0.0;
  bool degenerate = false;  // r undefined (constant values); reported as 0
};

/// Ordinary least squares line and Pearson correlation.
inline TrendResult fatigue_trend(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw InputError("trend: times and values differ in length");
  if (times.size() < 2) throw InputError("trend needs at least 2 points");
  const double n = static_cast<double>(times.size());
  double mt = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    mt += times[i];
    mv += values[i];
  }
  mt /= n;
  mv /= n;
  double stt = 0.0, svv = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dt = times[i] - mt;
    const double dv = values[i] - mv;
    stt += dt * dt;
    svv += dv * dv;
    stv += dt * dv;
  }
  if (!(stt > 0.0)) throw InputError("trend needs at least 2 distinct time points");
  TrendResult res;
  res.slope = stv / stt;
  res.intercept = mv - res.slope * mt;
  if (svv > 0.0) {
    res.r = std::clamp(stv / std::sqrt(stt * svv), -1.0, 1.0);
  } else {
    res.r = 0.0;
    res.degenerate = true;
  }
  return res;
}

}  // namespace semg
