#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "semg/core.hpp"
#include "semg/fft.hpp"

namespace semg {

/// Deterministic standard-normal source. The bit stream is std::mt19937_64,
/// whose output sequence is fixed by the C++ standard; the uniform and normal
/// transforms are done here so results do not depend on the standard
/// library's distribution implementations.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1) from the top 53 bits.
  double uniform() {
    double u = 0.0;
    while (u == 0.0) u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u;
  }

  /// Box-Muller; both variates of a pair are used.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Band {
  double low = 0.0;
  double high = 0.0;
};

struct CentroidTrajectory {
  double start_hz = 0.0;
  double end_hz = 0.0;
  double bandwidth_hz = 10.0;
};

struct SynthSpec {
  double fs = 1000.0;
  double duration = 10.0;  // s
  double amplitude = 1.0;  // target RMS, mV
  std::uint64_t seed = 1;
  std::string label = "synth";
};

inline constexpr double kSynthBlockMs = 250.0;
inline constexpr double kSynthFadeMs = 50.0;

namespace detail {

inline std::size_t synth_length(const SynthSpec& spec) {
  require_fs(spec.fs);
  if (!(spec.duration > 0.0)) throw InputError("synthesis duration must be positive");
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) {
    throw InputError("synthesis amplitude must be finite and >= 0");
  }
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * spec.fs));
  if (n < 1) throw InputError("synthesis duration shorter than one sample");
  return n;
}

inline void require_band(const Band& band, double fs) {
  if (!(band.low > 0.0) || !(band.high > band.low) || !(band.high < fs / 2.0)) {
    throw InputError("synthesis band [" + std::to_string(band.low) + ", " +
                     std::to_string(band.high) + "] Hz must satisfy 0 < low < high < fs/2");
  }
}

// Gaussian noise with a flat spectrum on [low, high] and zero elsewhere,
// unit expected variance. Shaped on a power-of-two grid of at least
// 4 * length points and truncated.
inline std::vector<double> band_limited_noise(std::size_t length, const Band& band, double fs,
                                              GaussianSource& rng) {
  const std::size_t nfft = fft::next_power_of_two(std::max<std::size_t>(4 * length, 16));
  std::vector<fft::Complex> buf(nfft);
  for (auto& v : buf) v = rng.normal();
  buf = fft::forward(std::move(buf));
  std::size_t kept = 0;
  for (std::size_t k = 0; k < nfft; ++k) {
    const std::size_t mirror = std::min(k, nfft - k);
    const double f = static_cast<double>(mirror) * fs / static_cast<double>(nfft);
    if (f >= band.low && f <= band.high) {
      ++kept;
    } else {
      buf[k] = 0.0;
    }
  }
  if (kept == 0) throw InputError("synthesis band narrower than the shaping grid");
  buf = fft::inverse(std::move(buf));
  const double scale = 1.0 / std::sqrt(static_cast<double>(kept) / static_cast<double>(nfft));
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = buf[i].real() * scale;
  return out;
}

}  // namespace detail

/// amplitude * sin(2 pi f t + phase), sampled exactly at t = n / fs.
inline ChannelSignal synth_sine(double f, double amplitude, double fs, double duration,
                                double phase = 0.0, std::string label = "sine") {
  detail::require_fs(fs);
  if (!(f >= 0.0) || !(f < fs / 2.0)) throw InputError("sine frequency must be in [0, fs/2)");
  if (!(duration > 0.0)) throw InputError("sine duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * fs));
  if (n < 1) throw InputError("sine duration shorter than one sample");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Reduce the cycle count first so the phase stays exact over long signals.
    const double cycles = std::fmod(f * static_cast<double>(i), fs) / fs;
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * cycles + phase);
  }
  return ChannelSignal(std::move(label), std::move(x), fs);
}

/// Stationary Gaussian noise with a flat spectrum on `band` and RMS
/// `spec.amplitude` in expectation.
inline ChannelSignal synth_band_noise(const SynthSpec& spec, const Band& band) {
  const std::size_t n = detail::synth_length(spec);
  detail::require_band(band, spec.fs);
  GaussianSource rng(spec.seed);
  auto x = detail::band_limited_noise(n, band, spec.fs, rng);
  for (double& v : x) v *= spec.amplitude;
  return ChannelSignal(spec.label, std::move(x), spec.fs);
}

struct FatigueSynthesis {
  ChannelSignal signal;
  std::vector<double> truth_time;      // block centers, s
  std::vector<double> truth_centroid;  // Hz
  double start_hz = 0.0;
  double slope = 0.0;  // Hz/s of the analytic trajectory

  /// Analytic centroid at time t.
  double centroid_at(double t) const { return start_hz + slope * t; }
};

/// Block-stationary noise whose flat band moves linearly from
/// `traj.start_hz` to `traj.end_hz` over the duration. Blocks of 250 ms are
/// joined by 50 ms equal-power cross-fades.
inline FatigueSynthesis synth_fatigue_sequence(const SynthSpec& spec, const CentroidTrajectory& traj) {
  const std::size_t n = detail::synth_length(spec);
  if (!(traj.bandwidth_hz > 0.0)) throw InputError("centroid bandwidth must be positive");
  const double half_bw = traj.bandwidth_hz / 2.0;
  for (double c : {traj.start_hz, traj.end_hz}) {
    if (!(c - half_bw > 0.0) || !(c + half_bw < spec.fs / 2.0)) {
      throw InputError("centroid trajectory leaves (0, fs/2) at " + std::to_string(c) + " Hz with " +
                       std::to_string(traj.bandwidth_hz) + " Hz bandwidth");
    }
  }
  const double slope = (traj.end_hz - traj.start_hz) / spec.duration;
  const std::size_t block = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kSynthBlockMs * spec.fs / 1000.0)));
  const std::size_t fade = std::min(block, static_cast<std::size_t>(std::llround(kSynthFadeMs * spec.fs / 1000.0)));

  GaussianSource rng(spec.seed);
  std::vector<double> x(n, 0.0);
  FatigueSynthesis out{ChannelSignal(spec.label, std::vector<double>(1, 0.0), spec.fs), {}, {},
                       traj.start_hz, slope};
  for (std::size_t start = 0; start < n; start += block) {
    const double t_center = (static_cast<double>(start) + 0.5 * static_cast<double>(block)) / spec.fs;
    const double centroid = traj.start_hz + slope * std::min(t_center, spec.duration);
    out.truth_time.push_back(t_center);
    out.truth_centroid.push_back(centroid);

    const std::size_t len = std::min(block + fade, n - start);
    const auto seg = detail::band_limited_noise(len, {centroid - half_bw, centroid + half_bw}, spec.fs, rng);
    for (std::size_t i = 0; i < len; ++i) {
      double w = 1.0;
      if (start > 0 && i < fade) {
        w = std::sin(0.5 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(fade));
      } else if (i >= block) {
        w = std::cos(0.5 * std::numbers::pi * static_cast<double>(i - block) / static_cast<double>(fade));
      }
      x[start + i] += w * seg[i] * spec.amplitude;
    }
  }
  out.signal = ChannelSignal(spec.label, std::move(x), spec.fs);
  return out;
}

}  // namespace semg
