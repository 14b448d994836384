#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "semg/core.hpp"

namespace semg {

inline constexpr std::size_t kCyclePoints = 101;

/// Envelope resampled onto a uniform 0..100 % cycle grid.
struct CycleEnvelope {
  std::vector<double> values;
  EnvelopeUnit unit = EnvelopeUnit::Millivolt;

  double step() const { return 100.0 / static_cast<double>(values.size() - 1); }
};

/// Linear resampling to `points` equally spaced positions; endpoints are kept
/// exactly.
inline CycleEnvelope time_normalize(std::span<const double> env, std::size_t points = kCyclePoints,
                                    EnvelopeUnit unit = EnvelopeUnit::Millivolt) {
  if (env.size() < 2) throw InputError("time normalization needs at least 2 envelope samples");
  if (points < 2) throw InputError("time normalization needs at least 2 grid points");
  CycleEnvelope out;
  out.unit = unit;
  out.values.resize(points);
  const double span = static_cast<double>(env.size() - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double pos = span * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto j = static_cast<std::size_t>(pos);
    if (j + 1 >= env.size()) {
      out.values[i] = env.back();
    } else {
      const double frac = pos - static_cast<double>(j);
      out.values[i] = env[j] + frac * (env[j + 1] - env[j]);
    }
  }
  out.values.front() = env.front();
  out.values.back() = env.back();
  return out;
}

inline CycleEnvelope time_normalize(const Envelope& env, std::size_t points = kCyclePoints) {
  return time_normalize(env.samples(), points, env.unit());
}

/// Trapezoidal integral over the 0..100 % grid (units: envelope units * %).
inline double integrate_emg(const CycleEnvelope& env) {
  if (env.values.size() < 2) throw InputError("iEMG needs at least 2 grid points");
  for (double v : env.values) {
    if (v < 0.0) throw InputError("iEMG needs a nonnegative envelope");
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < env.values.size(); ++i) {
    s += 0.5 * (env.values[i] + env.values[i + 1]);
  }
  return s * env.step();
}

struct CoactivationRow {
  std::string label;
  double iemg = 0.0;
  double ci = 0.0;
};

struct CoactivationReport {
  std::vector<CoactivationRow> rows;
  std::size_t cycle_points = kCyclePoints;
  EnvelopeUnit unit = EnvelopeUnit::Millivolt;
  double total_iemg = 0.0;
};

namespace detail {

inline void require_same_grid(const std::map<std::string, CycleEnvelope>& envelopes) {
  if (envelopes.size() < 2) throw InputError("coactivation needs at least 2 muscles");
  const auto& first = envelopes.begin()->second;
  for (const auto& [label, env] : envelopes) {
    if (env.values.size() != first.values.size()) {
      throw InputError("coactivation grid mismatch for '" + label + "'");
    }
    if (env.unit != first.unit) throw InputError("coactivation unit mismatch for '" + label + "'");
  }
}

}  // namespace detail

/// Share of the target muscle's iEMG in the summed iEMG of all muscles.
inline CoactivationRow coactivation_index(const std::string& target,
                                          const std::map<std::string, CycleEnvelope>& envelopes) {
  detail::require_same_grid(envelopes);
  const auto it = envelopes.find(target);
  if (it == envelopes.end()) throw InputError("coactivation target '" + target + "' not in set");
  double total = 0.0;
  for (const auto& [label, env] : envelopes) total += integrate_emg(env);
  if (!(total > 0.0)) throw ComputeError("coactivation denominator is zero (all envelopes zero)");
  const double own = integrate_emg(it->second);
  return {target, own, own / total};
}

/// Coactivation index of every muscle in the set.
inline CoactivationReport coactivation_report(const std::map<std::string, CycleEnvelope>& envelopes) {
  detail::require_same_grid(envelopes);
  CoactivationReport rep;
  rep.cycle_points = envelopes.begin()->second.values.size();
  rep.unit = envelopes.begin()->second.unit;
  for (const auto& [label, env] : envelopes) {
    rep.rows.push_back({label, integrate_emg(env), 0.0});
    rep.total_iemg += rep.rows.back().iemg;
  }
  if (!(rep.total_iemg > 0.0)) {
    throw ComputeError("coactivation denominator is zero (all envelopes zero)");
  }
  for (auto& row : rep.rows) row.ci = row.iemg / rep.total_iemg;
  return rep;
}

}  // namespace semg
