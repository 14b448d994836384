#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "semg/core.hpp"
#include "semg/epoching.hpp"
#include "semg/io.hpp"
#include "semg/spectral.hpp"

namespace semg {

/// Every setting of a batch run. Defaults reproduce the reference pipeline:
/// 4th-order 15-400 Hz Butterworth, 60 Hz notch with 3 harmonics, 500 ms
/// epochs with 50 % overlap.
struct PipelineConfig {
  struct Filter {
    bool enabled = true;
    int order = 4;
    double low_hz = 15.0;
    double high_hz = 400.0;
    bool zero_phase = true;
  } filter;

  struct Notch {
    bool enabled = true;
    double f0_hz = 60.0;
    int harmonics = 3;
    double q = 30.0;
  } notch;

  EpochPlan epoch{};

  struct Smoothing {
    EnvelopeKind kind = EnvelopeKind::MovingAverage;
    double window_ms = 250.0;
  } smoothing;

  struct Features {
    double zc_threshold_mv = 0.01;
    SpectralConfig spectral{};
  } features;

  struct Segment {
    std::optional<double> t0;
    std::optional<double> t1;
  } segment;

  struct Stats {
    double alpha = 0.05;
    std::string test = "auto";  // auto | shapiro-wilk | dagostino-d | kolmogorov-smirnov
    std::size_t histogram_bins = 10;
  } stats;

  /// Per-muscle MVC: either a value in mV or a CSV of trials.
  std::map<std::string, double> mvc_values;
  std::map<std::string, std::string> mvc_trial_files;

  std::string output_dir = "out";

  /// Checks every setting that does not depend on the recording.
  void validate() const {
    if (filter.order < 1 || filter.order > 12) throw InputError("filter.order must be in [1, 12]");
    if (!(filter.low_hz > 0.0) || !(filter.high_hz > filter.low_hz)) {
      throw InputError("filter band must satisfy 0 < low < high");
    }
    if (!(notch.f0_hz > 0.0)) throw InputError("notch.f0 must be positive");
    if (notch.harmonics < 1) throw InputError("notch.harmonics must be >= 1");
    if (!(notch.q > 0.0)) throw InputError("notch.q must be positive");
    if (!(epoch.overlap_fraction >= 0.0) || !(epoch.overlap_fraction < 1.0)) {
      throw InputError("epoch.overlap must be in [0, 1)");
    }
    if (!(epoch.window_ms > 0.0)) throw InputError("epoch.window_ms must be positive");
    if (!(smoothing.window_ms > 0.0)) throw InputError("smoothing.window_ms must be positive");
    if (!(features.zc_threshold_mv >= 0.0)) throw InputError("features.zc_threshold_mv must be >= 0");
    if (segment.t0 && segment.t1 && !(*segment.t1 > *segment.t0)) {
      throw InputError("segment.t1 must exceed segment.t0");
    }
    if (segment.t0 && *segment.t0 < 0.0) throw InputError("segment.t0 must be >= 0");
    if (!(stats.alpha > 0.0) || !(stats.alpha < 1.0)) throw InputError("stats.alpha must be in (0, 1)");
    static const std::set<std::string> tests{"auto", "shapiro-wilk", "dagostino-d", "kolmogorov-smirnov"};
    if (!tests.contains(stats.test)) throw InputError("stats.test '" + stats.test + "' is not recognized");
    if (stats.histogram_bins < 1) throw InputError("stats.histogram_bins must be >= 1");
    for (const auto& [label, v] : mvc_values) {
      if (!(v > 0.0)) throw InputError("mvc." + label + " must be positive");
    }
  }

  /// Checks the settings that depend on the sampling rate.
  void validate_for(double fs) const {
    validate();
    epoch.validate(fs);
    if (filter.enabled && !(filter.high_hz < fs / 2.0)) {
      throw InputError("filter.high " + std::to_string(filter.high_hz) + " Hz must lie below fs/2 = " +
                       std::to_string(fs / 2.0) + " Hz");
    }
    if (notch.enabled && !(notch.f0_hz < fs / 2.0)) {
      throw InputError("notch.f0 must lie below fs/2");
    }
  }
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw InputError(key + ": expected a boolean, got '" + v + "'");
}

inline double parse_real(const std::string& key, const std::string& v) {
  const auto d = io::detail::parse_double(v);
  if (!d || !std::isfinite(*d)) throw InputError(key + ": expected a number, got '" + v + "'");
  return *d;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_real(key, v);
  if (d != static_cast<double>(static_cast<int>(d))) throw InputError(key + ": expected an integer");
  return static_cast<int>(d);
}

}  // namespace detail

/// Loads an INI-style config (sections filter, notch, epoch, smoothing,
/// features, segment, stats, mvc, output). Unknown keys are rejected.
inline PipelineConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw InputError("config: key '" + section + "' must be inside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string v = node.data();
      using namespace detail;
      if (section == "filter") {
        if (key == "enabled") cfg.filter.enabled = parse_bool(name, v);
        else if (key == "order") cfg.filter.order = parse_int(name, v);
        else if (key == "low") cfg.filter.low_hz = parse_real(name, v);
        else if (key == "high") cfg.filter.high_hz = parse_real(name, v);
        else if (key == "zero_phase") cfg.filter.zero_phase = parse_bool(name, v);
        else throw InputError("config: unknown key " + name);
      } else if (section == "notch") {
        if (key == "enabled") cfg.notch.enabled = parse_bool(name, v);
        else if (key == "f0") cfg.notch.f0_hz = parse_real(name, v);
        else if (key == "harmonics") cfg.notch.harmonics = parse_int(name, v);
        else if (key == "q") cfg.notch.q = parse_real(name, v);
        else throw InputError("config: unknown key " + name);
      } else if (section == "epoch") {
        if (key == "window_ms") cfg.epoch.window_ms = parse_real(name, v);
        else if (key == "overlap") cfg.epoch.overlap_fraction = parse_real(name, v);
        else throw InputError("config: unknown key " + name);
      } else if (section == "smoothing") {
        if (key == "kind") {
          if (v == "moving-average") cfg.smoothing.kind = EnvelopeKind::MovingAverage;
          else if (v == "rms") cfg.smoothing.kind = EnvelopeKind::Rms;
          else throw InputError(name + ": expected moving-average or rms");
        } else if (key == "window_ms") {
          cfg.smoothing.window_ms = parse_real(name, v);
        } else {
          throw InputError("config: unknown key " + name);
        }
      } else if (section == "features") {
        if (key == "zc_threshold_mv") cfg.features.zc_threshold_mv = parse_real(name, v);
        else if (key == "window") {
          if (v == "hann") cfg.features.spectral.window = WindowType::Hann;
          else if (v == "rectangular") cfg.features.spectral.window = WindowType::Rectangular;
          else throw InputError(name + ": expected hann or rectangular");
        } else if (key == "pad_pow2") {
          cfg.features.spectral.pad_to_power_of_two = parse_bool(name, v);
        } else {
          throw InputError("config: unknown key " + name);
        }
      } else if (section == "segment") {
        if (key == "t0") cfg.segment.t0 = parse_real(name, v);
        else if (key == "t1") cfg.segment.t1 = parse_real(name, v);
        else throw InputError("config: unknown key " + name);
      } else if (section == "stats") {
        if (key == "alpha") cfg.stats.alpha = parse_real(name, v);
        else if (key == "test") cfg.stats.test = v;
        else if (key == "histogram_bins") {
          const int bins = parse_int(name, v);
          if (bins < 1) throw InputError(name + " must be >= 1");
          cfg.stats.histogram_bins = static_cast<std::size_t>(bins);
        }
        else throw InputError("config: unknown key " + name);
      } else if (section == "mvc") {
        const std::string suffix = ".trials";
        if (key.size() > suffix.size() && key.ends_with(suffix)) {
          cfg.mvc_trial_files[key.substr(0, key.size() - suffix.size())] = v;
        } else {
          cfg.mvc_values[key] = parse_real(name, v);
        }
      } else if (section == "output") {
        if (key == "dir") cfg.output_dir = v;
        else throw InputError("config: unknown key " + name);
      } else {
        throw InputError("config: unknown section [" + section + "]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace semg
