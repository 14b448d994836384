#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semg/coactivation.hpp"
#include "semg/config.hpp"
#include "semg/core.hpp"
#include "semg/epoching.hpp"
#include "semg/features.hpp"
#include "semg/io.hpp"
#include "semg/normalization.hpp"
#include "semg/preprocess.hpp"
#include "semg/spectral.hpp"
#include "semg/stats.hpp"
#include "semg/svg.hpp"

namespace semg {

// ---------------------------------------------------------------------------
// Stages

/// Active-segment selection, offset removal, band-pass and notch.
inline ChannelSignal condition_channel(const ChannelSignal& raw, const PipelineConfig& cfg,
                                       Diagnostics* diag = nullptr, bool apply_segment = true) {
  ChannelSignal x = raw;
  if (apply_segment && (cfg.segment.t0 || cfg.segment.t1)) {
    x = select_active_segment(x, cfg.segment.t0.value_or(0.0), cfg.segment.t1.value_or(x.duration()));
  }
  x = remove_offset(x);
  if (cfg.filter.enabled) {
    const auto bp = design_butterworth_bandpass(cfg.filter.order, cfg.filter.low_hz, cfg.filter.high_hz, x.fs());
    x = apply_filter(bp, x, cfg.filter.zero_phase);
  }
  if (cfg.notch.enabled) {
    x = notch_powerline(x, cfg.notch.f0_hz, cfg.notch.harmonics, cfg.notch.q, cfg.filter.zero_phase, diag);
  }
  return x;
}

inline std::vector<ChannelSignal> preprocess_recording(const Recording& rec, const PipelineConfig& cfg,
                                                       Diagnostics* diag = nullptr) {
  cfg.validate_for(rec.fs());
  std::vector<ChannelSignal> out;
  Diagnostics local;
  for (const auto& c : rec.channels()) {
    out.push_back(condition_channel(c, cfg, out.empty() ? &local : nullptr));
  }
  if (diag) diag->insert(diag->end(), local.begin(), local.end());
  return out;
}

inline FeatureTable channel_features(const ChannelSignal& conditioned, const PipelineConfig& cfg) {
  return feature_table(segment(conditioned, cfg.epoch),
                       FeatureConfig{cfg.features.zc_threshold_mv, cfg.features.spectral});
}

/// Named feature columns as real vectors, in output order.
inline std::vector<std::pair<std::string, std::vector<double>>> feature_columns(const FeatureTable& t) {
  return {{"rms", t.rms},
          {"arv", t.arv},
          {"zc", std::vector<double>(t.zc.begin(), t.zc.end())},
          {"mnf", t.mnf},
          {"mdf", t.mdf}};
}

inline std::map<std::string, TrendResult> channel_trends(const FeatureTable& t) {
  std::map<std::string, TrendResult> out;
  if (t.rows() < 2) return out;
  for (const auto& [name, col] : feature_columns(t)) out[name] = fatigue_trend(t.time, col);
  return out;
}

inline Envelope channel_envelope(const ChannelSignal& conditioned, const PipelineConfig& cfg) {
  const std::size_t window = std::min(ms_to_samples(cfg.smoothing.window_ms, conditioned.fs()), conditioned.size());
  if (cfg.smoothing.kind == EnvelopeKind::Rms) return rms_envelope(conditioned, window);
  return moving_average_envelope(rectify(conditioned), window);
}

/// MVC references from config values and trial files. Trial files hold one
/// trial per column and are conditioned like the recording (no segment
/// selection) before rectification and smoothing.
inline std::map<std::string, MvcReference> load_mvc_references(const PipelineConfig& cfg, double fs,
                                                               const std::string& base_dir,
                                                               Diagnostics* diag = nullptr) {
  std::map<std::string, MvcReference> refs;
  for (const auto& [label, v] : cfg.mvc_values) refs[label] = mvc_from_value(label, v);
  for (const auto& [label, file] : cfg.mvc_trial_files) {
    std::filesystem::path p(file);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    io::CsvOptions opt;
    opt.fs = fs;
    const Recording trials = io::ingest_csv(p.string(), opt);
    std::vector<ChannelSignal> labelled;
    for (const auto& t : trials.channels()) {
      const ChannelSignal c = condition_channel(t, cfg, nullptr, false);
      labelled.emplace_back(label, std::vector<double>(c.samples().begin(), c.samples().end()), c.fs());
    }
    Diagnostics local;
    auto ref = mvc_from_trials(labelled, ms_to_samples(cfg.smoothing.window_ms, fs), &local);
    for (auto& w : local) detail::warn(diag, "mvc " + label + ": " + w);
    refs[label] = std::move(ref);
  }
  return refs;
}

/// Envelopes of all channels, %MVC-normalized when every channel has a
/// reference, time-normalized to the 0..100 % cycle.
inline CoactivationReport recording_coactivation(const std::vector<ChannelSignal>& conditioned,
                                                 const PipelineConfig& cfg,
                                                 const std::map<std::string, MvcReference>& mvc,
                                                 Diagnostics* diag = nullptr) {
  bool all_have_mvc = !mvc.empty();
  for (const auto& c : conditioned) all_have_mvc = all_have_mvc && mvc.contains(c.label());
  if (!mvc.empty() && !all_have_mvc) {
    detail::warn(diag, "MVC references missing for some channels; coactivation uses mV envelopes");
  }
  std::map<std::string, CycleEnvelope> cycles;
  for (const auto& c : conditioned) {
    Envelope env = channel_envelope(c, cfg);
    if (all_have_mvc) {
      auto norm = normalize_to_mvc(env, mvc.at(c.label()), diag);
      if (norm.exceeds_mvc) {
        detail::warn(diag, c.label() + " envelope reaches " + io::format_number(norm.peak_percent) + " %MVC");
      }
      env = std::move(norm.envelope);
    }
    cycles.emplace(c.label(), time_normalize(env));
  }
  return coactivation_report(cycles);
}

struct StatsRow {
  std::string channel;
  std::string feature;
  NormalityReport report;
};

inline NormalityReport run_normality(std::span<const double> col, const PipelineConfig& cfg) {
  const std::string& which = cfg.stats.test;
  if (which == "auto") return choose_test(col, cfg.stats.alpha);
  NormalityReport rep;
  rep.decided_by = which;
  rep.reason = "test forced by configuration";
  if (which == "shapiro-wilk") {
    rep.results.push_back(shapiro_wilk(col, cfg.stats.alpha));
  } else if (which == "dagostino-d") {
    rep.results.push_back(dagostino_d(col, cfg.stats.alpha));
  } else {
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = col.size() > 1 ? std::sqrt(ss / static_cast<double>(col.size() - 1)) : 0.0;
    if (!(sd > 0.0)) throw ComputeError("zero variance: KS against a fitted normal is undefined");
    rep.results.push_back(ks_test(
        col, [mean, sd](double v) { return 0.5 * std::erfc(-(v - mean) / (sd * std::numbers::sqrt2)); },
        cfg.stats.alpha));
  }
  return rep;
}

inline std::vector<StatsRow> feature_statistics(const std::vector<FeatureTable>& tables,
                                                const PipelineConfig& cfg) {
  std::vector<StatsRow> rows;
  for (const auto& t : tables) {
    for (const auto& [name, col] : feature_columns(t)) {
      rows.push_back({t.label, name, run_normality(col, cfg)});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Writers

namespace detail {

inline std::string cell(const std::optional<double>& v) { return v ? io::format_number(*v) : ""; }

inline std::string safe_name(const std::string& label) {
  std::string s;
  for (char c : label) {
    s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return s.empty() ? "channel" : s;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline std::string features_csv(const std::vector<FeatureTable>& tables) {
  using io::format_number;
  std::ostringstream out;
  out << "channel,epoch,t_start_s,rms_mv,arv_mv,zc,mnf_hz,mdf_hz\n";
  for (const auto& t : tables) {
    for (std::size_t i = 0; i < t.rows(); ++i) {
      out << t.label << ',' << i << ',' << format_number(t.time[i]) << ',' << format_number(t.rms[i]) << ','
          << format_number(t.arv[i]) << ',' << t.zc[i] << ',' << format_number(t.mnf[i]) << ','
          << format_number(t.mdf[i]) << '\n';
    }
  }
  return out.str();
}

inline std::string fatigue_csv(const std::vector<FeatureTable>& tables) {
  using io::format_number;
  std::ostringstream out;
  out << "channel,feature,slope_per_s,intercept,r,degenerate\n";
  for (const auto& t : tables) {
    for (const auto& [name, tr] : channel_trends(t)) {
      out << t.label << ',' << name << ',' << format_number(tr.slope) << ',' << format_number(tr.intercept)
          << ',' << format_number(tr.r) << ',' << (tr.degenerate ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

inline std::string coactivation_csv(const CoactivationReport& rep) {
  using io::format_number;
  std::ostringstream out;
  out << "muscle,iemg,ci,unit,cycle_points\n";
  for (const auto& r : rep.rows) {
    out << r.label << ',' << format_number(r.iemg) << ',' << format_number(r.ci) << ','
        << to_string(rep.unit) << ',' << rep.cycle_points << '\n';
  }
  return out.str();
}

inline std::string stats_csv(const std::vector<StatsRow>& rows) {
  using io::format_number;
  std::ostringstream out;
  out << "channel,feature,test,n,statistic,p_value,alpha,critical_low,critical_high,reject_null,decides\n";
  for (const auto& row : rows) {
    if (row.report.results.empty()) {
      out << row.channel << ',' << row.feature << ",none,,,,,,,,\n";
      continue;
    }
    for (const auto& r : row.report.results) {
      out << row.channel << ',' << row.feature << ',' << r.test << ',' << r.n << ','
          << format_number(r.statistic) << ',' << detail::cell(r.p_value) << ',' << format_number(r.alpha)
          << ',' << detail::cell(r.critical_low) << ',' << detail::cell(r.critical_high) << ','
          << (r.reject_null ? (*r.reject_null ? "true" : "false") : "") << ','
          << (r.test == row.report.decided_by ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json to_json(const TestResult& r) {
  nlohmann::json j{{"test", r.test}, {"n", r.n}, {"statistic", r.statistic}, {"alpha", r.alpha}};
  j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
  j["critical_low"] = r.critical_low ? nlohmann::json(*r.critical_low) : nlohmann::json(nullptr);
  j["critical_high"] = r.critical_high ? nlohmann::json(*r.critical_high) : nlohmann::json(nullptr);
  j["reject_null"] = r.reject_null ? nlohmann::json(*r.reject_null) : nlohmann::json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

inline nlohmann::json to_json(const MvcReference& m) {
  return {{"label", m.label},
          {"mvc_mv", m.mvc_value},
          {"trial_peaks_mv", m.trial_peaks},
          {"smoothing", to_string(m.smoothing)},
          {"window_samples", m.window_samples},
          {"fs", m.fs}};
}

inline MvcReference mvc_from_json(const nlohmann::json& j) {
  MvcReference m;
  m.label = j.at("label").get<std::string>();
  m.mvc_value = j.at("mvc_mv").get<double>();
  m.trial_peaks = j.at("trial_peaks_mv").get<std::vector<double>>();
  m.smoothing = j.at("smoothing").get<std::string>() == "rms" ? EnvelopeKind::Rms : EnvelopeKind::MovingAverage;
  m.window_samples = j.at("window_samples").get<std::size_t>();
  m.fs = j.at("fs").get<double>();
  if (!(m.mvc_value > 0.0)) throw InputError("non-positive MVC for '" + m.label + "'");
  return m;
}

inline nlohmann::json config_json(const PipelineConfig& cfg) {
  return {{"filter", {{"enabled", cfg.filter.enabled}, {"order", cfg.filter.order}, {"low_hz", cfg.filter.low_hz},
                      {"high_hz", cfg.filter.high_hz}, {"zero_phase", cfg.filter.zero_phase}}},
          {"notch", {{"enabled", cfg.notch.enabled}, {"f0_hz", cfg.notch.f0_hz},
                     {"harmonics", cfg.notch.harmonics}, {"q", cfg.notch.q}}},
          {"epoch", {{"window_ms", cfg.epoch.window_ms}, {"overlap", cfg.epoch.overlap_fraction}}},
          {"smoothing", {{"kind", to_string(cfg.smoothing.kind)}, {"window_ms", cfg.smoothing.window_ms}}},
          {"features", {{"zc_threshold_mv", cfg.features.zc_threshold_mv},
                        {"window", cfg.features.spectral.window == WindowType::Hann ? "hann" : "rectangular"},
                        {"pad_pow2", cfg.features.spectral.pad_to_power_of_two}}},
          {"stats", {{"alpha", cfg.stats.alpha}, {"test", cfg.stats.test}, {"histogram_bins", cfg.stats.histogram_bins}}}};
}

/// SVG plots for one channel: PSD at epoch deciles, MNF/MDF trends, box
/// plots and an MNF histogram.
inline std::map<std::string, std::string> channel_plots(const ChannelSignal& conditioned, const FeatureTable& t,
                                                        const PipelineConfig& cfg) {
  std::map<std::string, std::string> files;
  const std::string name = detail::safe_name(t.label);
  const EpochSeries series = segment(conditioned, cfg.epoch);

  std::vector<svg::Series> psd;
  std::size_t last = static_cast<std::size_t>(-1);
  for (int d = 0; d <= 10; ++d) {
    const auto k = static_cast<std::size_t>(std::llround(d / 10.0 * static_cast<double>(series.size() - 1)));
    if (k == last) continue;
    last = k;
    const auto p = periodogram(series.epochs[k], cfg.features.spectral);
    psd.push_back({"decile " + std::to_string(d) + " (t=" + io::format_number(series.epochs[k].start_time()) + " s)",
                   std::vector<double>(p.freqs().begin(), p.freqs().end()),
                   std::vector<double>(p.density().begin(), p.density().end())});
  }
  files["psd_" + name + ".svg"] = svg::line_chart("PSD " + t.label, "frequency (Hz)", "mV^2/Hz", psd);

  std::vector<svg::Series> trend{{"MNF", t.time, t.mnf}, {"MDF", t.time, t.mdf}};
  if (t.rows() >= 2) {
    for (const auto& [col, values] : {std::pair{"MNF fit", &t.mnf}, std::pair{"MDF fit", &t.mdf}}) {
      const auto tr = fatigue_trend(t.time, *values);
      trend.push_back({col, {t.time.front(), t.time.back()},
                       {tr.intercept + tr.slope * t.time.front(), tr.intercept + tr.slope * t.time.back()}, true});
    }
  }
  files["trend_" + name + ".svg"] = svg::line_chart("Spectral trend " + t.label, "time (s)", "Hz", trend);

  files["boxplot_" + name + "_freq.svg"] = svg::box_plot(
      "Frequency features " + t.label, "Hz", {{"MNF", quartile_summary(t.mnf)}, {"MDF", quartile_summary(t.mdf)}});
  files["boxplot_" + name + "_amp.svg"] = svg::box_plot(
      "Amplitude features " + t.label, "mV", {{"RMS", quartile_summary(t.rms)}, {"ARV", quartile_summary(t.arv)}});
  files["histogram_" + name + "_mnf.svg"] =
      svg::histogram_chart("MNF histogram " + t.label, "Hz", histogram(t.mnf, cfg.stats.histogram_bins));
  return files;
}

struct PipelineResult {
  std::vector<FeatureTable> features;
  std::optional<CoactivationReport> coactivation;
  std::vector<StatsRow> stats;
  std::map<std::string, MvcReference> mvc;
  Diagnostics warnings;
  std::vector<std::string> files;
};

/// Full batch run: preprocessing, epoching, features, trends, coactivation,
/// normality statistics and plots, written under `out_dir`.
inline PipelineResult run_pipeline(const PipelineConfig& cfg, const Recording& rec, const std::string& out_dir,
                                   const std::string& base_dir = "") {
  cfg.validate_for(rec.fs());
  PipelineResult res;
  res.warnings = rec.warnings();

  const auto conditioned = preprocess_recording(rec, cfg, &res.warnings);
  for (const auto& c : conditioned) res.features.push_back(channel_features(c, cfg));
  res.mvc = load_mvc_references(cfg, rec.fs(), base_dir, &res.warnings);
  if (conditioned.size() >= 2) {
    res.coactivation = recording_coactivation(conditioned, cfg, res.mvc, &res.warnings);
  } else {
    res.warnings.push_back("single channel: coactivation skipped");
  }
  res.stats = feature_statistics(res.features, cfg);

  std::map<std::string, std::string> files;
  files["features.csv"] = features_csv(res.features);
  files["fatigue.csv"] = fatigue_csv(res.features);
  files["stats.csv"] = stats_csv(res.stats);
  if (res.coactivation) files["coactivation.csv"] = coactivation_csv(*res.coactivation);
  for (std::size_t i = 0; i < conditioned.size(); ++i) {
    for (auto& [name, text] : channel_plots(conditioned[i], res.features[i], cfg)) {
      files["plots/" + name] = std::move(text);
    }
  }

  nlohmann::json summary;
  summary["config"] = config_json(cfg);
  summary["recording"] = {{"fs", rec.fs()}, {"samples", rec.length()}, {"channels", rec.channels().size()},
                          {"meta", rec.meta()}};
  for (const auto& t : res.features) {
    nlohmann::json ch{{"epochs", t.rows()}};
    for (const auto& [name, tr] : channel_trends(t)) {
      ch["trend"][name] = {{"slope_per_s", tr.slope}, {"intercept", tr.intercept}, {"r", tr.r},
                           {"degenerate", tr.degenerate}};
    }
    summary["channels"][t.label] = ch;
  }
  for (const auto& [label, m] : res.mvc) summary["mvc"][label] = to_json(m);
  if (res.coactivation) {
    for (const auto& r : res.coactivation->rows) summary["coactivation"][r.label] = {{"iemg", r.iemg}, {"ci", r.ci}};
  }
  for (const auto& row : res.stats) {
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& r : row.report.results) tests.push_back(to_json(r));
    summary["normality"][row.channel][row.feature] = {
        {"decided_by", row.report.decided_by}, {"reason", row.report.reason}, {"tests", tests}};
  }
  summary["warnings"] = res.warnings;
  files["summary.json"] = summary.dump(2) + "\n";

  const std::filesystem::path root(out_dir);
  std::filesystem::create_directories(root / "plots");
  for (const auto& [name, text] : files) {
    detail::write_file(root / name, text);
    res.files.push_back(name);
  }
  return res;
}

}  // namespace semg
