#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semg/core.hpp"

namespace semg::io {

/// Nine significant digits, '.' separator, independent of the C locale.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

/// Shortest representation that parses back to the same double.
inline std::string format_exact(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline bool is_time_header(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "t" || lower == "time" || lower == "time_s" || lower == "t_s" ||
         lower == "seconds";
}

}  // namespace detail

struct CsvOptions {
  std::optional<double> fs;
  Units units = Units::Millivolt;
  /// Allowed relative deviation of each time step from the mean step.
  double time_tolerance = 1e-6;
};

/// Parses a recording. Rows are numbered by file line (the header is row 1).
inline Recording parse_csv(std::istream& in, const CsvOptions& opt = {},
                           std::map<std::string, std::string> meta = {}) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    for (auto cell : detail::split(line)) header.emplace_back(cell);
    break;
  }
  if (header.empty()) throw InputError("no samples: file is empty");

  const bool has_time = detail::is_time_header(header.front());
  const std::size_t first_channel = has_time ? 1 : 0;
  if (header.size() <= first_channel) throw InputError("no channel columns in header");
  for (std::size_t c = first_channel; c < header.size(); ++c) {
    if (header[c].empty()) throw InputError("empty column name in header (column " + std::to_string(c + 1) + ")");
  }

  std::vector<double> time;
  std::vector<std::vector<double>> cols(header.size() - first_channel);
  std::vector<std::size_t> rows;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != header.size()) {
      throw InputError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                       " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = detail::parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        throw InputError("row " + std::to_string(row) + ", column " + header[c] +
                         ": cannot parse '" + std::string(cells[c]) + "' as a finite number");
      }
      if (has_time && c == 0) {
        time.push_back(*v);
      } else {
        cols[c - first_channel].push_back(*v);
      }
    }
    rows.push_back(row);
  }
  if (cols.front().empty()) throw InputError("no samples: file has a header but no data rows");

  double fs = 0.0;
  if (has_time && time.size() >= 2) {
    const double dt = (time.back() - time.front()) / static_cast<double>(time.size() - 1);
    if (!(dt > 0.0)) throw InputError("time column is not increasing");
    for (std::size_t i = 1; i < time.size(); ++i) {
      if (std::abs((time[i] - time[i - 1]) - dt) > opt.time_tolerance * dt) {
        throw InputError("row " + std::to_string(rows[i]) + ": non-uniform time column (step " +
                         format_exact(time[i] - time[i - 1]) + " s vs mean " + format_exact(dt) + " s)");
      }
    }
    fs = 1.0 / dt;
    if (opt.fs && std::abs(*opt.fs - fs) > opt.time_tolerance * *opt.fs) {
      throw InputError("--fs " + format_exact(*opt.fs) + " Hz disagrees with the time column (" +
                       format_exact(fs) + " Hz)");
    }
    if (opt.fs) fs = *opt.fs;
  } else if (opt.fs) {
    fs = *opt.fs;
  } else {
    throw InputError("sampling rate unknown: no time column and no fs given");
  }

  const double k = to_millivolt_factor(opt.units);
  std::vector<std::pair<std::string, std::vector<double>>> channels;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (k != 1.0) {
      for (double& v : cols[c]) v *= k;
    }
    channels.emplace_back(header[c + first_channel], std::move(cols[c]));
  }
  return make_recording(std::move(channels), fs, std::move(meta));
}

/// Reads a recording from a CSV file: header row, optional leading time
/// column in seconds, one column per channel.
inline Recording ingest_csv(const std::string& path, const CsvOptions& opt = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, opt, {{"source", path}});
}

/// Writes `columns` with a leading time column t = i / fs.
inline void write_signals_csv(std::ostream& out, const std::vector<ChannelSignal>& columns) {
  if (columns.empty()) return;
  out << "t";
  for (const auto& c : columns) out << ',' << c.label();
  out << '\n';
  const double fs = columns.front().fs();
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    out << format_exact(static_cast<double>(i) / fs);
    for (const auto& c : columns) out << ',' << format_number(c.samples()[i]);
    out << '\n';
  }
}

}  // namespace semg::io
