#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semg/core.hpp"

namespace semg {

/// Biquad in transposed direct form II. Denominator is normalized (a0 = 1).
struct SecondOrderSection {
  std::array<double, 3> b{1.0, 0.0, 0.0};
  std::array<double, 3> a{1.0, 0.0, 0.0};

  std::complex<double> response(double omega) const {
    const std::complex<double> z1 = std::polar(1.0, -omega);
    const std::complex<double> z2 = z1 * z1;
    return (b[0] + b[1] * z1 + b[2] * z2) / (1.0 + a[1] * z1 + a[2] * z2);
  }

  /// Magnitudes of the two poles (roots of z^2 + a1 z + a2).
  std::array<double, 2> pole_magnitudes() const {
    const std::complex<double> disc = std::sqrt(std::complex<double>(a[1] * a[1] - 4.0 * a[2]));
    return {std::abs((-a[1] + disc) / 2.0), std::abs((-a[1] - disc) / 2.0)};
  }

  bool stable() const {
    const auto m = pole_magnitudes();
    return m[0] < 1.0 && m[1] < 1.0;
  }
};

enum class FilterKind { Bandpass, Notch };

/// Designed IIR filter as a cascade of second-order sections.
/// For a band-pass, `band` is (low Hz, high Hz); for a notch, (center Hz, Q).
struct FilterSpec {
  FilterKind kind = FilterKind::Bandpass;
  int order = 0;  // total order = 2 * number of sections
  std::pair<double, double> band{0.0, 0.0};
  double fs = 0.0;
  std::vector<SecondOrderSection> sections;

  std::complex<double> response(double freq_hz) const {
    const double omega = 2.0 * std::numbers::pi * freq_hz / fs;
    std::complex<double> h = 1.0;
    for (const auto& s : sections) h *= s.response(omega);
    return h;
  }

  double magnitude(double freq_hz) const { return std::abs(response(freq_hz)); }

  bool stable() const {
    return std::all_of(sections.begin(), sections.end(),
                       [](const SecondOrderSection& s) { return s.stable(); });
  }
};

// ---------------------------------------------------------------------------
// Offset and rectification

inline ChannelSignal remove_offset(const ChannelSignal& signal) {
  const auto xs = signal.samples();
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  std::vector<double> out(xs.begin(), xs.end());
  for (double& v : out) v -= mean;
  return signal.with_samples(std::move(out));
}

inline ChannelSignal rectify(const ChannelSignal& signal) {
  std::vector<double> out(signal.samples().begin(), signal.samples().end());
  for (double& v : out) v = std::abs(v);
  return signal.with_samples(std::move(out));
}

// ---------------------------------------------------------------------------
// Filter design

/// Butterworth band-pass from an analog low-pass prototype of `order` poles,
/// low-pass to band-pass transformation and a bilinear transform with both
/// band edges prewarped. The result has 2 * order poles grouped into
/// conjugate-pair sections, each scaled to unit gain at the band center.
inline FilterSpec design_butterworth_bandpass(int order, double low_hz, double high_hz, double fs) {
  detail::require_fs(fs);
  if (order < 1 || order > 12) throw InputError("band-pass order must be in [1, 12]");
  if (!(low_hz > 0.0) || !(high_hz > low_hz)) {
    throw InputError("band-pass edges must satisfy 0 < low < high");
  }
  if (!(high_hz < fs / 2.0)) {
    throw InputError("band-pass upper edge " + std::to_string(high_hz) +
                     " Hz must lie below fs/2 = " + std::to_string(fs / 2.0) + " Hz");
  }

  using C = std::complex<double>;
  const double c = 2.0 * fs;
  const double w_low = c * std::tan(std::numbers::pi * low_hz / fs);
  const double w_high = c * std::tan(std::numbers::pi * high_hz / fs);
  const double bw = w_high - w_low;
  const double w0_sq = w_low * w_high;

  std::vector<C> poles;
  for (int k = 0; k < order; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const C proto = std::polar(1.0, theta);
    // s^2 - p*bw*s + w0^2 = 0
    const C disc = std::sqrt(proto * proto * bw * bw - 4.0 * w0_sq);
    for (const C s : {(proto * bw + disc) / 2.0, (proto * bw - disc) / 2.0}) {
      poles.push_back((c + s) / (c - s));
    }
  }

  // Conjugate pairs become one section; leftover real poles are paired up.
  constexpr double kImagTol = 1e-12;
  std::vector<std::array<double, 3>> dens;
  std::vector<double> reals;
  for (const C& p : poles) {
    if (p.imag() > kImagTol) {
      dens.push_back({1.0, -2.0 * p.real(), std::norm(p)});
    } else if (std::abs(p.imag()) <= kImagTol) {
      reals.push_back(p.real());
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    dens.push_back({1.0, -(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]});
  }

  FilterSpec spec;
  spec.kind = FilterKind::Bandpass;
  spec.order = 2 * order;
  spec.band = {low_hz, high_hz};
  spec.fs = fs;
  const double center_omega = 2.0 * std::atan(std::sqrt(w0_sq) / c);
  for (const auto& den : dens) {
    SecondOrderSection s;
    s.a = den;
    s.b = {1.0, 0.0, -1.0};  // zeros at z = 1 and z = -1
    const double g = 1.0 / std::abs(s.response(center_omega));
    for (double& v : s.b) v *= g;
    spec.sections.push_back(s);
  }
  if (static_cast<int>(spec.sections.size()) * 2 != spec.order) {
    throw ComputeError("band-pass design produced an unpaired pole");
  }
  return spec;
}

/// Second-order IIR notch (zeros on the unit circle at `center_hz`).
inline SecondOrderSection design_notch_section(double center_hz, double q, double fs) {
  const double w0 = 2.0 * std::numbers::pi * center_hz / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  SecondOrderSection s;
  s.b = {1.0 / a0, -2.0 * std::cos(w0) / a0, 1.0 / a0};
  s.a = {1.0, -2.0 * std::cos(w0) / a0, (1.0 - alpha) / a0};
  return s;
}

/// Notch cascade at f0 and its harmonics. Harmonics at or above Nyquist are
/// skipped with a warning.
inline FilterSpec design_powerline_notch(double f0, int harmonics, double q, double fs,
                                         Diagnostics* diag = nullptr) {
  detail::require_fs(fs);
  if (!(f0 > 0.0) || !(f0 < fs / 2.0)) {
    throw InputError("notch frequency must lie in (0, fs/2)");
  }
  if (harmonics < 1) throw InputError("notch harmonics must be >= 1");
  if (!(q > 0.0)) throw InputError("notch Q must be positive");
  FilterSpec spec;
  spec.kind = FilterKind::Notch;
  spec.band = {f0, q};
  spec.fs = fs;
  for (int k = 1; k <= harmonics; ++k) {
    const double fk = k * f0;
    if (fk >= fs / 2.0) {
      detail::warn(diag, "notch harmonic " + std::to_string(k) + " at " + std::to_string(fk) +
                             " Hz is at or above Nyquist; skipped");
      continue;
    }
    spec.sections.push_back(design_notch_section(fk, q, fs));
  }
  spec.order = 2 * static_cast<int>(spec.sections.size());
  return spec;
}

// ---------------------------------------------------------------------------
// Filtering

namespace detail {

inline void run_sections(std::span<const SecondOrderSection> sections, std::vector<double>& x,
                         double initial_level) {
  double level = initial_level;
  for (const auto& s : sections) {
    // Steady-state state for a constant input `level`.
    const double gain = (s.b[0] + s.b[1] + s.b[2]) / (1.0 + s.a[1] + s.a[2]);
    const double out = gain * level;
    double z2 = s.b[2] * level - s.a[2] * out;
    double z1 = s.b[1] * level - s.a[1] * out + z2;
    for (double& v : x) {
      const double in = v;
      const double y = s.b[0] * in + z1;
      z1 = s.b[1] * in - s.a[1] * y + z2;
      z2 = s.b[2] * in - s.a[2] * y;
      v = y;
    }
    level = out;
  }
}

}  // namespace detail

/// Number of reflected samples added at each end for zero-phase filtering.
inline std::size_t zero_phase_padding(const FilterSpec& spec) {
  return 3 * static_cast<std::size_t>(spec.order);
}

/// Runs the cascade over `signal`. With `zero_phase` the cascade runs forward
/// and then backward over an odd-reflected, padded copy, with each pass
/// started from the steady state of its first sample.
inline ChannelSignal apply_filter(const FilterSpec& spec, const ChannelSignal& signal,
                                  bool zero_phase = true) {
  if (!spec.stable()) throw InputError("filter is unstable");
  if (spec.fs != signal.fs()) {
    throw InputError("filter designed for fs=" + std::to_string(spec.fs) +
                     " Hz applied to a signal at " + std::to_string(signal.fs()) + " Hz");
  }
  const auto xs = signal.samples();
  if (!zero_phase) {
    std::vector<double> y(xs.begin(), xs.end());
    detail::run_sections(spec.sections, y, 0.0);
    return signal.with_samples(std::move(y));
  }

  const std::size_t n = xs.size();
  const std::size_t pad = zero_phase_padding(spec);
  if (n <= pad) {
    throw InputError("signal of " + std::to_string(n) + " samples is too short for zero-phase "
                     "filtering (needs more than " + std::to_string(pad) + ")");
  }
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * xs[0] - xs[i]);
  ext.insert(ext.end(), xs.begin(), xs.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * xs[n - 1] - xs[n - 1 - i]);

  detail::run_sections(spec.sections, ext, ext.front());
  std::reverse(ext.begin(), ext.end());
  detail::run_sections(spec.sections, ext, ext.front());
  std::reverse(ext.begin(), ext.end());

  return signal.with_samples(std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                                                 ext.begin() + static_cast<std::ptrdiff_t>(pad + n)));
}

/// Removes power-line interference at `f0` and its harmonics.
inline ChannelSignal notch_powerline(const ChannelSignal& signal, double f0 = 60.0,
                                     int harmonics = 3, double q = 30.0, bool zero_phase = true,
                                     Diagnostics* diag = nullptr) {
  const FilterSpec spec = design_powerline_notch(f0, harmonics, q, signal.fs(), diag);
  return apply_filter(spec, signal, zero_phase);
}

// ---------------------------------------------------------------------------
// Envelopes

namespace detail {

inline std::size_t require_window(std::size_t window, std::size_t length) {
  if (window < 1 || window > length) {
    throw InputError("envelope window of " + std::to_string(window) +
                     " samples must be in [1, " + std::to_string(length) + "]");
  }
  return window;
}

}  // namespace detail

/// Causal moving average of a rectified signal. The first N-1 outputs are
/// the means of the available prefix, so the output has the input's length.
inline Envelope moving_average_envelope(const ChannelSignal& rectified, std::size_t window) {
  const auto xs = rectified.samples();
  detail::require_window(window, xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 0.0) {
      throw InputError("moving-average envelope needs a rectified signal (negative sample at index " +
                       std::to_string(i) + ")");
    }
  }
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i];
    if (i >= window) sum -= xs[i - window];
    const std::size_t count = std::min(i + 1, window);
    out[i] = std::max(0.0, sum / static_cast<double>(count));
  }
  return Envelope(std::move(out), rectified.fs(), EnvelopeKind::MovingAverage);
}

/// Causal sliding-window RMS with the same startup rule as the moving average.
inline Envelope rms_envelope(const ChannelSignal& signal, std::size_t window) {
  const auto xs = signal.samples();
  detail::require_window(window, xs.size());
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i] * xs[i];
    if (i >= window) sum -= xs[i - window] * xs[i - window];
    const std::size_t count = std::min(i + 1, window);
    out[i] = std::sqrt(std::max(0.0, sum / static_cast<double>(count)));
  }
  return Envelope(std::move(out), signal.fs(), EnvelopeKind::Rms);
}

/// Samples corresponding to `ms` milliseconds, rounded, at least 1.
inline std::size_t ms_to_samples(double ms, double fs) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ms * fs / 1000.0)));
}

}  // namespace semg
