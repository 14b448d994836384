#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "semg/io.hpp"
#include "semg/stats.hpp"

namespace semg::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

namespace detail {

inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 400.0;
inline constexpr double kLeft = 70.0;
inline constexpr double kRight = 20.0;
inline constexpr double kTop = 40.0;
inline constexpr double kBottom = 50.0;

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000"};
  return colors[i % (sizeof colors / sizeof *colors)];
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline Frame make_frame(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 = y0 + 1.0;
  }
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

inline void open(std::ostringstream& out, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel, const Frame& f) {
  using io::format_number;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(title) << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    out << "<text x=\"" << format_number(f.px(xv)) << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_number(xv) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_number(f.py(yv) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(yv) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xlabel) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << escape(ylabel) << "</text>\n";
}

}  // namespace detail

/// Line chart with one polyline per series and a legend.
inline std::string line_chart(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  const auto f = detail::make_frame(x0, x1, y0, y1);
  std::ostringstream out;
  detail::open(out, title, xlabel, ylabel, f);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    out << "<polyline fill=\"none\" stroke=\"" << detail::palette(i) << "\" stroke-width=\"1.2\""
        << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (k) out << ' ';
      out << io::format_number(f.px(s.x[k])) << ',' << io::format_number(f.py(s.y[k]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << detail::kWidth - detail::kRight - 4 << "\" y=\"" << detail::kTop + 14 * (i + 1)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << detail::palette(i) << "\">"
        << detail::escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

struct BoxGroup {
  std::string name;
  FiveNumberSummary summary;
};

/// Box-and-whisker plot, one box per group, outliers as circles.
inline std::string box_plot(const std::string& title, const std::string& ylabel,
                            const std::vector<BoxGroup>& groups) {
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& g : groups) {
    y0 = std::min(y0, g.summary.q0);
    y1 = std::max(y1, g.summary.q4);
    for (double o : g.summary.outliers) y0 = std::min(y0, o), y1 = std::max(y1, o);
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  const auto f = detail::make_frame(0.0, static_cast<double>(groups.size()), y0, y1);
  std::ostringstream out;
  detail::open(out, title, "", ylabel, f);
  using io::format_number;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& s = groups[i].summary;
    const double cx = f.px(static_cast<double>(i) + 0.5);
    const double half = 0.25 * (f.px(1.0) - f.px(0.0));
    out << "<g stroke=\"" << detail::palette(i) << "\" fill=\"none\">\n";
    out << "<line x1=\"" << format_number(cx) << "\" y1=\"" << format_number(f.py(s.q0)) << "\" x2=\""
        << format_number(cx) << "\" y2=\"" << format_number(f.py(s.q1)) << "\"/>\n";
    out << "<line x1=\"" << format_number(cx) << "\" y1=\"" << format_number(f.py(s.q3)) << "\" x2=\""
        << format_number(cx) << "\" y2=\"" << format_number(f.py(s.q4)) << "\"/>\n";
    out << "<rect x=\"" << format_number(cx - half) << "\" y=\"" << format_number(f.py(s.q3))
        << "\" width=\"" << format_number(2 * half) << "\" height=\""
        << format_number(f.py(s.q1) - f.py(s.q3)) << "\"/>\n";
    for (double q : {s.q0, s.q2, s.q4}) {
      const double w = q == s.q2 ? half : half / 2;
      out << "<line x1=\"" << format_number(cx - w) << "\" y1=\"" << format_number(f.py(q)) << "\" x2=\""
          << format_number(cx + w) << "\" y2=\"" << format_number(f.py(q)) << "\"/>\n";
    }
    for (double o : s.outliers) {
      out << "<circle cx=\"" << format_number(cx) << "\" cy=\"" << format_number(f.py(o)) << "\" r=\"3\"/>\n";
    }
    out << "</g>\n<text x=\"" << format_number(cx) << "\" y=\"" << detail::kHeight - detail::kBottom + 32
        << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::escape(groups[i].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

/// Bar chart of histogram counts.
inline std::string histogram_chart(const std::string& title, const std::string& xlabel,
                                   const HistogramSummary& h) {
  std::size_t peak = 0;
  for (auto c : h.counts) peak = std::max(peak, c);
  auto f = detail::make_frame(h.edges.front(), h.edges.back(), 0.0, static_cast<double>(std::max<std::size_t>(peak, 1)));
  f.y0 = 0.0;
  std::ostringstream out;
  detail::open(out, title, xlabel, "count", f);
  using io::format_number;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double x = f.px(h.edges[i]);
    const double w = f.px(h.edges[i + 1]) - x;
    const double top = f.py(static_cast<double>(h.counts[i]));
    out << "<rect x=\"" << format_number(x) << "\" y=\"" << format_number(top) << "\" width=\""
        << format_number(w) << "\" height=\"" << format_number(f.py(0.0) - top)
        << "\" fill=\"#1f77b4\" stroke=\"white\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace semg::svg
