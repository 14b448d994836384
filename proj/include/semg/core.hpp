#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semg/error.hpp"

namespace semg {

/// Sampling rate below which a recording is accepted with a warning: surface
/// EMG carries content up to roughly 500 Hz.
inline constexpr double kRecommendedMinFs = 1000.0;

enum class Units { Volt, Millivolt, Microvolt };

inline Units parse_units(const std::string& text) {
  if (text == "V" || text == "v") return Units::Volt;
  if (text == "mV" || text == "mv") return Units::Millivolt;
  if (text == "uV" || text == "uv" || text == "\xC2\xB5V") return Units::Microvolt;
  throw InputError("unknown units '" + text + "' (expected V, mV or uV)");
}

/// Multiplier converting a value in `u` to millivolts.
inline double to_millivolt_factor(Units u) {
  switch (u) {
    case Units::Volt: return 1e3;
    case Units::Millivolt: return 1.0;
    case Units::Microvolt: return 1e-3;
  }
  return 1.0;
}

namespace detail {

inline void require_fs(double fs) {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw InputError("sampling rate must be positive and finite");
  }
}

inline void require_finite(std::span<const double> xs, const std::string& what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw InputError(what + ": non-finite sample at index " + std::to_string(i));
    }
  }
}

}  // namespace detail

/// One sampled sEMG channel in millivolts.
class ChannelSignal {
 public:
  ChannelSignal(std::string label, std::vector<double> samples, double fs)
      : label_(std::move(label)), samples_(std::move(samples)), fs_(fs) {
    detail::require_fs(fs_);
    if (samples_.empty()) throw InputError("channel '" + label_ + "': no samples");
    detail::require_finite(samples_, "channel '" + label_ + "'");
  }

  const std::string& label() const noexcept { return label_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double fs() const noexcept { return fs_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration() const noexcept { return static_cast<double>(samples_.size()) / fs_; }

  /// Same label and rate, new samples.
  ChannelSignal with_samples(std::vector<double> samples) const {
    return ChannelSignal(label_, std::move(samples), fs_);
  }

 private:
  std::string label_;
  std::vector<double> samples_;
  double fs_;
};

/// Multi-channel session. All channels share length and sampling rate.
class Recording {
 public:
  const std::vector<ChannelSignal>& channels() const noexcept { return channels_; }
  double fs() const noexcept { return fs_; }
  const std::map<std::string, std::string>& meta() const noexcept { return meta_; }
  const Diagnostics& warnings() const noexcept { return warnings_; }
  std::size_t length() const noexcept { return channels_.front().size(); }

  const ChannelSignal& channel(const std::string& label) const {
    for (const auto& c : channels_) {
      if (c.label() == label) return c;
    }
    throw InputError("no channel named '" + label + "'");
  }

 private:
  friend Recording make_recording(std::vector<std::pair<std::string, std::vector<double>>>,
                                  double, std::map<std::string, std::string>);
  Recording() = default;

  std::vector<ChannelSignal> channels_;
  double fs_ = 0.0;
  std::map<std::string, std::string> meta_;
  Diagnostics warnings_;
};

/// Validates and assembles a recording from labelled sample vectors (mV).
inline Recording make_recording(std::vector<std::pair<std::string, std::vector<double>>> channels,
                                double fs, std::map<std::string, std::string> meta = {}) {
  detail::require_fs(fs);
  if (channels.empty()) throw InputError("recording has no channels");
  const std::size_t n = channels.front().second.size();
  for (const auto& [label, xs] : channels) {
    if (xs.size() != n) {
      throw InputError("length mismatch: channel '" + label + "' has " +
                       std::to_string(xs.size()) + " samples, expected " + std::to_string(n));
    }
  }
  Recording rec;
  rec.fs_ = fs;
  rec.meta_ = std::move(meta);
  rec.channels_.reserve(channels.size());
  for (auto& [label, xs] : channels) {
    rec.channels_.emplace_back(std::move(label), std::move(xs), fs);
  }
  if (fs < kRecommendedMinFs) {
    rec.warnings_.push_back("sampling rate " + std::to_string(fs) +
                            " Hz is below 1000 Hz; sEMG content up to 500 Hz will alias");
  }
  return rec;
}

/// Fixed-length analysis window cut from a channel.
struct Epoch {
  std::size_t start_index = 0;
  std::vector<double> samples;
  double fs = 0.0;

  double start_time() const noexcept { return static_cast<double>(start_index) / fs; }
  double center_time() const noexcept {
    return (static_cast<double>(start_index) + 0.5 * static_cast<double>(samples.size())) / fs;
  }
};

struct EpochSeries {
  std::string label;
  double fs = 0.0;
  std::size_t window = 0;
  std::size_t step = 0;
  std::vector<Epoch> epochs;

  std::size_t size() const noexcept { return epochs.size(); }
  bool empty() const noexcept { return epochs.empty(); }
};

/// One-sided power spectral density in mV^2/Hz on a uniform grid starting at 0 Hz.
class PowerSpectrum {
 public:
  PowerSpectrum(std::vector<double> freqs, std::vector<double> density, double df)
      : freqs_(std::move(freqs)), density_(std::move(density)), df_(df) {
    if (freqs_.size() != density_.size() || freqs_.empty()) {
      throw ComputeError("spectrum: frequency grid and density differ in length");
    }
    if (freqs_.front() != 0.0) throw ComputeError("spectrum: grid must start at 0 Hz");
    for (double p : density_) {
      if (!(p >= 0.0)) throw ComputeError("spectrum: negative or NaN density");
    }
  }

  std::span<const double> freqs() const noexcept { return freqs_; }
  std::span<const double> density() const noexcept { return density_; }
  double df() const noexcept { return df_; }
  std::size_t size() const noexcept { return freqs_.size(); }

  /// Integral of the density, i.e. total power in mV^2.
  double total_power() const noexcept {
    double s = 0.0;
    for (double p : density_) s += p;
    return s * df_;
  }

 private:
  std::vector<double> freqs_;
  std::vector<double> density_;
  double df_;
};

enum class EnvelopeKind { MovingAverage, Rms };
enum class EnvelopeUnit { Millivolt, PercentMvc };

inline const char* to_string(EnvelopeKind k) {
  return k == EnvelopeKind::MovingAverage ? "moving-average" : "rms";
}
inline const char* to_string(EnvelopeUnit u) {
  return u == EnvelopeUnit::Millivolt ? "mV" : "%MVC";
}

/// Smoothed, nonnegative amplitude trace.
class Envelope {
 public:
  Envelope(std::vector<double> samples, double fs, EnvelopeKind kind,
           EnvelopeUnit unit = EnvelopeUnit::Millivolt)
      : samples_(std::move(samples)), fs_(fs), kind_(kind), unit_(unit) {
    detail::require_fs(fs_);
    for (double v : samples_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ComputeError("envelope samples must be finite and >= 0");
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  double fs() const noexcept { return fs_; }
  EnvelopeKind kind() const noexcept { return kind_; }
  EnvelopeUnit unit() const noexcept { return unit_; }
  std::size_t size() const noexcept { return samples_.size(); }

 private:
  std::vector<double> samples_;
  double fs_;
  EnvelopeKind kind_;
  EnvelopeUnit unit_;
};

/// Per-epoch fatigue features for one channel.
struct FeatureTable {
  std::string label;
  double fs = 0.0;
  std::vector<double> time;  // epoch start, s
  std::vector<double> rms;
  std::vector<double> arv;
  std::vector<std::size_t> zc;
  std::vector<double> mnf;
  std::vector<double> mdf;

  std::size_t rows() const noexcept { return time.size(); }
};

/// Outcome of a hypothesis test. `reject_null` is set only when a p-value or
/// a critical value was actually used for the decision.
struct TestResult {
  std::string test;
  std::size_t n = 0;
  double statistic = 0.0;
  std::optional<double> p_value;
  double alpha = 0.05;
  std::optional<double> critical_low;
  std::optional<double> critical_high;
  std::optional<bool> reject_null;
  Diagnostics warnings;
};

}  // namespace semg
