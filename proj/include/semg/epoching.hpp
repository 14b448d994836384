#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semg/core.hpp"

namespace semg {

/// Window layout for stationarity epochs.
struct EpochPlan {
  double window_ms = 500.0;
  double overlap_fraction = 0.5;

  std::size_t window_samples(double fs) const {
    return static_cast<std::size_t>(std::llround(window_ms * fs / 1000.0));
  }

  std::size_t step_samples(double fs) const {
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(window_samples(fs)) * (1.0 - overlap_fraction)));
  }

  void validate(double fs) const {
    if (!(overlap_fraction >= 0.0) || !(overlap_fraction < 1.0)) {
      throw InputError("epoch overlap must be in [0, 1), got " + std::to_string(overlap_fraction));
    }
    if (!(window_ms > 0.0)) throw InputError("epoch window must be positive");
    if (window_samples(fs) < 2) throw InputError("epoch window must span at least 2 samples");
    if (step_samples(fs) < 1) throw InputError("epoch step rounds to zero samples");
  }
};

/// Number of full windows of `window` samples at stride `step` in `length` samples.
inline std::size_t epoch_count(std::size_t length, std::size_t window, std::size_t step) {
  if (length < window) return 0;
  return (length - window) / step + 1;
}

/// Cuts `signal` into full windows; a trailing partial window is dropped.
inline EpochSeries segment(const ChannelSignal& signal, const EpochPlan& plan = {}) {
  plan.validate(signal.fs());
  const std::size_t w = plan.window_samples(signal.fs());
  const std::size_t step = plan.step_samples(signal.fs());
  const auto xs = signal.samples();
  if (xs.size() < w) {
    throw InputError("signal of " + std::to_string(xs.size()) +
                     " samples is shorter than one epoch (" + std::to_string(w) + ")");
  }
  EpochSeries series{signal.label(), signal.fs(), w, step, {}};
  const std::size_t count = epoch_count(xs.size(), w, step);
  series.epochs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start = k * step;
    series.epochs.push_back(
        Epoch{start, std::vector<double>(xs.begin() + start, xs.begin() + start + w), signal.fs()});
  }
  return series;
}

/// Samples in [round(t0*fs), round(t1*fs)).
inline ChannelSignal select_active_segment(const ChannelSignal& signal, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0) || t1 > signal.duration() + 0.5 / signal.fs()) {
    throw InputError("active segment [" + std::to_string(t0) + ", " + std::to_string(t1) +
                     ") s is inverted or outside the " + std::to_string(signal.duration()) +
                     " s signal");
  }
  const auto xs = signal.samples();
  const auto begin = static_cast<std::size_t>(std::llround(t0 * signal.fs()));
  const auto end = std::min(xs.size(), static_cast<std::size_t>(std::llround(t1 * signal.fs())));
  if (end <= begin) throw InputError("active segment contains no samples");
  return signal.with_samples(std::vector<double>(xs.begin() + begin, xs.begin() + end));
}

}  // namespace semg
