#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "semg/core.hpp"
#include "semg/preprocess.hpp"

namespace semg {

/// Amplitude reference from maximum-voluntary-contraction trials.
struct MvcReference {
  std::string label;
  double mvc_value = 0.0;  // mV, mean of trial_peaks
  std::vector<double> trial_peaks;
  EnvelopeKind smoothing = EnvelopeKind::MovingAverage;
  std::size_t window_samples = 0;
  double fs = 0.0;
};

inline constexpr double kDefaultMvcWindowMs = 250.0;

/// Rectifies and smooths each trial, takes the envelope peak of each, and
/// averages the peaks. Warns when the protocol (three trials of about five
/// seconds) is not followed.
inline MvcReference mvc_from_trials(const std::vector<ChannelSignal>& trials, std::size_t window,
                                    Diagnostics* diag = nullptr) {
  if (trials.empty()) throw InputError("MVC needs at least one trial");
  const double fs = trials.front().fs();
  if (trials.size() != 3) {
    detail::warn(diag, "MVC computed from " + std::to_string(trials.size()) +
                           " trial(s); the protocol calls for 3");
  }
  MvcReference ref;
  ref.label = trials.front().label();
  ref.window_samples = window;
  ref.fs = fs;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& trial = trials[i];
    if (trial.fs() != fs) throw InputError("MVC trials have different sampling rates");
    const double d = trial.duration();
    if (d < 4.0 || d > 6.0) {
      detail::warn(diag, "MVC trial " + std::to_string(i + 1) + " lasts " + std::to_string(d) +
                             " s; expected about 5 s");
    }
    const Envelope env = moving_average_envelope(rectify(trial), window);
    ref.trial_peaks.push_back(*std::max_element(env.samples().begin(), env.samples().end()));
  }
  ref.mvc_value = std::accumulate(ref.trial_peaks.begin(), ref.trial_peaks.end(), 0.0) /
                  static_cast<double>(ref.trial_peaks.size());
  if (!(ref.mvc_value > 0.0)) throw ComputeError("non-positive MVC: every trial peak is zero");
  for (double p : ref.trial_peaks) {
    if (!(p > 0.0)) throw ComputeError("non-positive MVC: a trial has zero amplitude");
  }
  return ref;
}

/// MVC reference from a known value, for references stored in config files.
inline MvcReference mvc_from_value(std::string label, double mvc_mv) {
  if (!(mvc_mv > 0.0) || !std::isfinite(mvc_mv)) {
    throw InputError("non-positive MVC for '" + label + "'");
  }
  MvcReference ref;
  ref.label = std::move(label);
  ref.mvc_value = mvc_mv;
  ref.trial_peaks = {mvc_mv};
  return ref;
}

struct NormalizedEnvelope {
  Envelope envelope;  // %MVC
  bool exceeds_mvc = false;
  double peak_percent = 0.0;
};

/// 100 * envelope / MVC. Values above 100 % are kept and flagged.
inline NormalizedEnvelope normalize_to_mvc(const Envelope& env, const MvcReference& ref,
                                           Diagnostics* diag = nullptr) {
  if (!(ref.mvc_value > 0.0)) throw InputError("non-positive MVC for '" + ref.label + "'");
  if (env.unit() != EnvelopeUnit::Millivolt) throw InputError("envelope is already normalized");
  if (ref.window_samples != 0 && env.kind() != ref.smoothing) {
    detail::warn(diag, std::string("envelope smoothing (") + to_string(env.kind()) +
                           ") differs from the MVC reference (" + to_string(ref.smoothing) + ")");
  }
  std::vector<double> out(env.samples().begin(), env.samples().end());
  double peak = 0.0;
  for (double& v : out) {
    v = 100.0 * v / ref.mvc_value;
    peak = std::max(peak, v);
  }
  return {Envelope(std::move(out), env.fs(), env.kind(), EnvelopeUnit::PercentMvc), peak > 100.0,
          peak};
}

}  // namespace semg
