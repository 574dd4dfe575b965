#pragma once

// CSV tables and minimal standalone SVG line plots.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace burgers::io {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << std::setprecision(17);
  return os;
}

/// Columns of equal length under a comma-separated header.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& cols) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n' << std::setprecision(17);
  const std::size_t rows = cols.empty() ? 0 : cols[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c][r];
    os << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& cols) {
  auto os = open_out(path);
  write_csv(os, header, cols);
}

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool dashed = false;
};

inline std::string svg_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

inline std::string svg_plot(const std::string& title, const std::string& xlabel,
                            const std::string& ylabel, const std::vector<Series>& series) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" << svg_escape(title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
    << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    o << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << xv
      << "</text>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << Y(yv) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << yv
      << "</text>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << svg_escape(xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" transform=\"rotate(-90 16 "
    << (mt + H - mb) / 2 << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"13\">" << svg_escape(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) o << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    o << "\"/>\n";
    if (!s.label.empty())
      o << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 15 * k
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << colors[k % 6] << "\">" << svg_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline void write_svg(const std::string& path, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << svg_plot(title, xlabel, ylabel, series);
}

}  // namespace burgers::io
