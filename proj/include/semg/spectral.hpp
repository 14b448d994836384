#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "semg/core.hpp"
#include "semg/epoching.hpp"
#include "semg/fft.hpp"

namespace semg {

enum class WindowType { Rectangular, Hann };

struct SpectralConfig {
  WindowType window = WindowType::Hann;
  /// Zero-pad each segment to the next power of two. Changes grid density only.
  bool pad_to_power_of_two = false;
};

/// Periodic window of length n (the DFT-even form used for spectral analysis).
inline std::vector<double> make_window(WindowType type, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (type == WindowType::Hann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

namespace detail {

// One-sided |X_k|^2 / (fs * sum w^2) for k = 0..nfft/2; interior bins doubled.
inline std::vector<double> modified_periodogram(std::span<const double> x, std::span<const double> w,
                                                double fs, std::size_t nfft) {
  std::vector<fft::Complex> buf(nfft);
  double wpow = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    buf[i] = x[i] * w[i];
    wpow += w[i] * w[i];
  }
  const auto spectrum = fft::forward(std::move(buf));
  const std::size_t bins = nfft / 2 + 1;
  std::vector<double> p(bins);
  const double scale = 1.0 / (fs * wpow);
  for (std::size_t k = 0; k < bins; ++k) {
    p[k] = std::norm(spectrum[k]) * scale;
    const bool nyquist = (nfft % 2 == 0) && k == nfft / 2;
    if (k != 0 && !nyquist) p[k] *= 2.0;
  }
  return p;
}

inline std::vector<double> frequency_grid(std::size_t nfft, double fs) {
  std::vector<double> f(nfft / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(k) * fs / static_cast<double>(nfft);
  }
  return f;
}

inline std::size_t dft_length(std::size_t n, const SpectralConfig& cfg) {
  return cfg.pad_to_power_of_two ? fft::next_power_of_two(n) : n;
}

}  // namespace detail

/// One-sided PSD of a single segment, normalized by window power so that the
/// integrated density equals the window-weighted mean square.
inline PowerSpectrum periodogram(std::span<const double> samples, double fs,
                                 const SpectralConfig& cfg = {}) {
  detail::require_fs(fs);
  if (samples.size() < 2) throw InputError("periodogram needs at least 2 samples");
  const std::size_t nfft = detail::dft_length(samples.size(), cfg);
  const auto w = make_window(cfg.window, samples.size());
  return PowerSpectrum(detail::frequency_grid(nfft, fs),
                       detail::modified_periodogram(samples, w, fs, nfft),
                       fs / static_cast<double>(nfft));
}

inline PowerSpectrum periodogram(const Epoch& epoch, const SpectralConfig& cfg = {}) {
  return periodogram(epoch.samples, epoch.fs, cfg);
}

/// Welch estimate: mean of modified periodograms over segments of `seg_len`
/// samples laid out like epochs (stride round(seg_len * (1 - overlap)),
/// trailing partial segment dropped).
inline PowerSpectrum welch_psd(std::span<const double> samples, double fs, std::size_t seg_len,
                               double overlap = 0.5, const SpectralConfig& cfg = {}) {
  detail::require_fs(fs);
  if (seg_len < 2) throw InputError("Welch segment length must be at least 2");
  if (seg_len > samples.size()) {
    throw InputError("Welch segment length " + std::to_string(seg_len) + " exceeds signal length " +
                     std::to_string(samples.size()));
  }
  if (!(overlap >= 0.0) || !(overlap < 1.0)) throw InputError("Welch overlap must be in [0, 1)");
  const auto step = static_cast<std::size_t>(
      std::llround(static_cast<double>(seg_len) * (1.0 - overlap)));
  if (step < 1) throw InputError("Welch step rounds to zero samples");

  const std::size_t nfft = detail::dft_length(seg_len, cfg);
  const auto w = make_window(cfg.window, seg_len);
  const std::size_t count = epoch_count(samples.size(), seg_len, step);
  std::vector<double> acc(nfft / 2 + 1, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const auto p = detail::modified_periodogram(samples.subspan(s * step, seg_len), w, fs, nfft);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += p[k];
  }
  for (double& v : acc) v /= static_cast<double>(count);
  return PowerSpectrum(detail::frequency_grid(nfft, fs), std::move(acc),
                       fs / static_cast<double>(nfft));
}

inline PowerSpectrum welch_psd(const ChannelSignal& signal, std::size_t seg_len,
                               double overlap = 0.5, const SpectralConfig& cfg = {}) {
  return welch_psd(signal.samples(), signal.fs(), seg_len, overlap, cfg);
}

/// Number of segments welch_psd averages for the given layout.
inline std::size_t welch_segment_count(std::size_t length, std::size_t seg_len, double overlap) {
  const auto step = static_cast<std::size_t>(
      std::llround(static_cast<double>(seg_len) * (1.0 - overlap)));
  return step == 0 ? 0 : epoch_count(length, seg_len, step);
}

}  // namespace semg
