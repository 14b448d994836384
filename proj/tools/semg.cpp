// Batch command-line front end for the sEMG toolkit.
//
// Exit status: 0 success, 2 validation or ingest error, 3 computation error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "semg/config.hpp"
#include "semg/io.hpp"
#include "semg/pipeline.hpp"
#include "semg/synth.hpp"

namespace {

struct CommonArgs {
  std::string input;
  std::string config_path;
  std::optional<double> fs;
  std::string units = "mV";
  std::string out;
  std::optional<double> alpha;
};

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 1;
  std::string kind = "fatigue";
  double fs = 1000.0;
  double duration = 10.0;
  double amplitude = 1.0;
  double start_hz = 120.0;
  double end_hz = 80.0;
  double bandwidth_hz = 10.0;
  double low_hz = 50.0;
  double high_hz = 150.0;
  double sine_hz = 100.0;
  std::string channels = "synth";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_alpha) {
  cmd->add_option("input", a.input, "Recording CSV (header row, optional leading time column in s)")->required();
  cmd->add_option("--config", a.config_path, "Pipeline config file (INI sections)");
  cmd->add_option("--fs", a.fs, "Sampling rate in Hz when the CSV has no time column");
  cmd->add_option("--units", a.units, "Units of the CSV samples")->check(CLI::IsMember({"V", "mV", "uV"}));
  cmd->add_option("--out", a.out, "Output directory");
  if (with_alpha) cmd->add_option("--alpha", a.alpha, "Significance level");
}

struct Loaded {
  semg::PipelineConfig cfg;
  semg::Recording rec;
  std::string base_dir;
  std::filesystem::path out;
};

Loaded load(const CommonArgs& a) {
  semg::PipelineConfig cfg;
  std::string base_dir;
  if (!a.config_path.empty()) {
    cfg = semg::load_config(a.config_path);
    base_dir = std::filesystem::path(a.config_path).parent_path().string();
  }
  if (a.alpha) cfg.stats.alpha = *a.alpha;
  if (!a.out.empty()) cfg.output_dir = a.out;
  cfg.validate();
  semg::io::CsvOptions opt;
  opt.fs = a.fs;
  opt.units = semg::parse_units(a.units);
  auto rec = semg::io::ingest_csv(a.input, opt);
  cfg.validate_for(rec.fs());
  return {cfg, std::move(rec), base_dir, std::filesystem::path(cfg.output_dir)};
}

void write(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw semg::InputError("cannot write '" + (dir / name).string() + "'");
  out << text;
}

void print_warnings(const semg::Diagnostics& w) {
  for (const auto& m : w) std::cerr << "semg: warning: " << m << '\n';
}

int cmd_ingest_check(const CommonArgs& a) {
  const auto l = load(a);
  nlohmann::json j{{"fs", l.rec.fs()},
                   {"samples", l.rec.length()},
                   {"duration_s", static_cast<double>(l.rec.length()) / l.rec.fs()},
                   {"warnings", l.rec.warnings()}};
  for (const auto& c : l.rec.channels()) j["channels"].push_back(c.label());
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_preprocess(const CommonArgs& a) {
  const auto l = load(a);
  semg::Diagnostics diag = l.rec.warnings();
  const auto cond = semg::preprocess_recording(l.rec, l.cfg, &diag);
  std::ostringstream out;
  semg::io::write_signals_csv(out, cond);
  write(l.out, "preprocessed.csv", out.str());
  print_warnings(diag);
  return 0;
}

std::vector<semg::FeatureTable> features_of(const Loaded& l, semg::Diagnostics& diag) {
  std::vector<semg::FeatureTable> tables;
  for (const auto& c : semg::preprocess_recording(l.rec, l.cfg, &diag)) {
    tables.push_back(semg::channel_features(c, l.cfg));
  }
  return tables;
}

int cmd_features(const CommonArgs& a) {
  const auto l = load(a);
  semg::Diagnostics diag = l.rec.warnings();
  write(l.out, "features.csv", semg::features_csv(features_of(l, diag)));
  print_warnings(diag);
  return 0;
}

int cmd_fatigue(const CommonArgs& a) {
  const auto l = load(a);
  semg::Diagnostics diag = l.rec.warnings();
  const auto cond = semg::preprocess_recording(l.rec, l.cfg, &diag);
  std::vector<semg::FeatureTable> tables;
  for (const auto& c : cond) tables.push_back(semg::channel_features(c, l.cfg));
  write(l.out, "features.csv", semg::features_csv(tables));
  write(l.out, "fatigue.csv", semg::fatigue_csv(tables));
  for (std::size_t i = 0; i < cond.size(); ++i) {
    for (const auto& [name, text] : semg::channel_plots(cond[i], tables[i], l.cfg)) {
      if (name.starts_with("trend_")) write(l.out / "plots", name, text);
    }
  }
  print_warnings(diag);
  return 0;
}

int cmd_coactivation(const CommonArgs& a) {
  const auto l = load(a);
  semg::Diagnostics diag = l.rec.warnings();
  const auto cond = semg::preprocess_recording(l.rec, l.cfg, &diag);
  const auto mvc = semg::load_mvc_references(l.cfg, l.rec.fs(), l.base_dir, &diag);
  const auto rep = semg::recording_coactivation(cond, l.cfg, mvc, &diag);
  write(l.out, "coactivation.csv", semg::coactivation_csv(rep));
  if (!mvc.empty()) {
    nlohmann::json j;
    for (const auto& [label, m] : mvc) j[label] = semg::to_json(m);
    write(l.out, "mvc.json", j.dump(2) + "\n");
  }
  print_warnings(diag);
  return 0;
}

int cmd_stats(const CommonArgs& a) {
  const auto l = load(a);
  semg::Diagnostics diag = l.rec.warnings();
  write(l.out, "stats.csv", semg::stats_csv(semg::feature_statistics(features_of(l, diag), l.cfg)));
  print_warnings(diag);
  return 0;
}

int cmd_pipeline(const CommonArgs& a) {
  const auto l = load(a);
  const auto res = semg::run_pipeline(l.cfg, l.rec, l.out.string(), l.base_dir);
  print_warnings(res.warnings);
  return 0;
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw semg::InputError("--channels needs at least one label");
  return out;
}

int cmd_synth(const SynthArgs& a) {
  const auto labels = split_labels(a.channels);
  std::vector<semg::ChannelSignal> channels;
  std::ostringstream truth;
  truth << "t,centroid_hz\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    semg::SynthSpec spec{a.fs, a.duration, a.amplitude, a.seed + i, labels[i]};
    if (a.kind == "fatigue") {
      auto f = semg::synth_fatigue_sequence(spec, {a.start_hz, a.end_hz, a.bandwidth_hz});
      if (i == 0) {
        for (std::size_t k = 0; k < f.truth_time.size(); ++k) {
          truth << semg::io::format_number(f.truth_time[k]) << ',' << semg::io::format_number(f.truth_centroid[k])
                << '\n';
        }
      }
      channels.push_back(std::move(f.signal));
    } else if (a.kind == "band") {
      channels.push_back(semg::synth_band_noise(spec, {a.low_hz, a.high_hz}));
      if (i == 0) {
        const std::string mid = semg::io::format_number(0.5 * (a.low_hz + a.high_hz));
        truth << "0," << mid << '\n' << semg::io::format_number(a.duration) << ',' << mid << '\n';
      }
    } else {
      channels.push_back(semg::synth_sine(a.sine_hz, a.amplitude, a.fs, a.duration, 0.0, labels[i]));
      if (i == 0) {
        const std::string f = semg::io::format_number(a.sine_hz);
        truth << "0," << f << '\n' << semg::io::format_number(a.duration) << ',' << f << '\n';
      }
    }
  }
  std::ostringstream csv;
  semg::io::write_signals_csv(csv, channels);
  const std::filesystem::path dir(a.out);
  write(dir, "synth.csv", csv.str());
  write(dir, "truth.csv", truth.str());
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface EMG processing toolkit"};
  app.require_subcommand(1);

  CommonArgs common;
  SynthArgs synth;
  struct Entry {
    CLI::App* cmd;
    int (*run)(const CommonArgs&);
  };
  std::vector<Entry> entries = {
      {app.add_subcommand("ingest-check", "Validate a recording and print its layout"), cmd_ingest_check},
      {app.add_subcommand("preprocess", "Offset removal, band-pass and notch; writes preprocessed.csv"), cmd_preprocess},
      {app.add_subcommand("features", "Per-epoch RMS, ARV, ZC, MNF, MDF; writes features.csv"), cmd_features},
      {app.add_subcommand("fatigue", "Features plus trend lines; writes fatigue.csv"), cmd_fatigue},
      {app.add_subcommand("coactivation", "Coactivation index per muscle; writes coactivation.csv"), cmd_coactivation},
      {app.add_subcommand("stats", "Normality tests on feature columns; writes stats.csv"), cmd_stats},
      {app.add_subcommand("pipeline", "Run every stage and write all artifacts"), cmd_pipeline},
  };
  for (auto& e : entries) {
    const std::string name = e.cmd->get_name();
    add_common(e.cmd, common, name == "stats" || name == "pipeline");
  }

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic recording with a ground-truth sidecar");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--kind", synth.kind, "Signal kind")->check(CLI::IsMember({"fatigue", "band", "sine"}));
  synth_cmd->add_option("--fs", synth.fs, "Sampling rate, Hz");
  synth_cmd->add_option("--duration", synth.duration, "Duration, s");
  synth_cmd->add_option("--amplitude", synth.amplitude, "RMS (noise) or peak (sine) amplitude, mV");
  synth_cmd->add_option("--start", synth.start_hz, "Fatigue: initial spectral centroid, Hz");
  synth_cmd->add_option("--end", synth.end_hz, "Fatigue: final spectral centroid, Hz");
  synth_cmd->add_option("--bandwidth", synth.bandwidth_hz, "Fatigue: band width around the centroid, Hz");
  synth_cmd->add_option("--low", synth.low_hz, "Band: lower edge, Hz");
  synth_cmd->add_option("--high", synth.high_hz, "Band: upper edge, Hz");
  synth_cmd->add_option("--freq", synth.sine_hz, "Sine: frequency, Hz");
  synth_cmd->add_option("--channels", synth.channels, "Comma-separated channel labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "semg: error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth);
    for (const auto& e : entries) {
      if (e.cmd->parsed()) return e.run(common);
    }
  } catch (const semg::InputError& e) {
    std::cerr << "semg: error: input: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const semg::ComputeError& e) {
    std::cerr << "semg: error: compute: " << one_line(e.what()) << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "semg: error: runtime: " << one_line(e.what()) << '\n';
    return 3;
  }
  return 0;
}
