// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include "capres/errors.hpp"

namespace capres
{

namespace
{

std::string Chars(double x, std::chars_format fmt, int precision)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, fmt, precision);
  return std::string(buf, res.ptr);
}

std::string Px(double x) { return Chars(x, std::chars_format::fixed, 2); }

std::string TickLabel(double x) { return Chars(x, std::chars_format::general, 4); }

double NiceStep(double range)
{
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

constexpr double kWidth = 760.0, kHeight = 520.0;
constexpr double kLeft = 80.0, kRight = 190.0, kTop = 44.0, kBottom = 60.0;

}  // namespace

std::string FormatNumber(double x)
{
  if (std::isnan(x))
  {
    return "nan";
  }
  if (std::isinf(x))
  {
    return x > 0 ? "inf" : "-inf";
  }
  return Chars(x, std::chars_format::general, 17);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable &CsvTable::Row()
{
  rows_.emplace_back();
  return *this;
}

CsvTable &CsvTable::Add(double x)
{
  rows_.back().push_back(FormatNumber(x));
  return *this;
}

CsvTable &CsvTable::Add(long long x)
{
  rows_.back().push_back(std::to_string(x));
  return *this;
}

CsvTable &CsvTable::Add(const std::string &text)
{
  std::string cell = text;
  if (cell.find_first_of(",\"\n") != std::string::npos)
  {
    std::string q = "\"";
    for (char c : cell)
    {
      q += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    cell = q + "\"";
  }
  rows_.back().push_back(cell);
  return *this;
}

std::string CsvTable::Render() const
{
  std::string out;
  auto line = [&](const std::vector<std::string> &cells) {
    for (std::size_t k = 0; k < cells.size(); k++)
    {
      if (k > 0)
      {
        out += ',';
      }
      out += cells[k];
    }
    out += '\n';
  };
  line(header_);
  for (const auto &row : rows_)
  {
    if (row.size() != header_.size())
    {
      throw Error("CSV row has " + std::to_string(row.size()) + " cells, header has " +
                  std::to_string(header_.size()));
    }
    line(row);
  }
  return out;
}

void WriteFile(const std::string &path, const std::string &content)
{
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path())
  {
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error("cannot write " + path);
  }
  out << content;
  if (!out)
  {
    throw Error("failed while writing " + path);
  }
}

std::string Rgb::Hex() const
{
  static const char *digits = "0123456789abcdef";
  std::string s = "#";
  for (int v : {r, g, b})
  {
    v = std::clamp(v, 0, 255);
    s += digits[v / 16];
    s += digits[v % 16];
  }
  return s;
}

Rgb PhaseColor(double phase)
{
  // Hue wheel starting at red for phase -pi, full saturation.
  double h = (phase + std::numbers::pi) / (2.0 * std::numbers::pi);
  h = h - std::floor(h);
  const double hh = h * 6.0;
  const int sector = static_cast<int>(hh) % 6;
  const double f = hh - std::floor(hh);
  const double v = 0.9, p = 0.0, q = v * (1.0 - f), t = v * f;
  double r = 0, g = 0, b = 0;
  switch (sector)
  {
  case 0: r = v; g = t; b = p; break;
  case 1: r = q; g = v; b = p; break;
  case 2: r = p; g = v; b = t; break;
  case 3: r = p; g = q; b = v; break;
  case 4: r = t; g = p; b = v; break;
  default: r = v; g = p; b = q; break;
  }
  return {static_cast<int>(std::lround(r * 255)), static_cast<int>(std::lround(g * 255)),
          static_cast<int>(std::lround(b * 255))};
}

Rgb CategoryColor(int index)
{
  static const Rgb palette[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44},
                                {214, 39, 40},  {148, 103, 189}, {140, 86, 75},
                                {227, 119, 194}, {127, 127, 127}, {188, 189, 34},
                                {23, 190, 207}};
  const int n = static_cast<int>(sizeof(palette) / sizeof(palette[0]));
  return palette[((index % n) + n) % n];
}

std::string XmlEscape(const std::string &text)
{
  std::string out;
  for (char c : text)
  {
    switch (c)
    {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
  : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
    xmin_(std::numeric_limits<double>::infinity()), xmax_(-std::numeric_limits<double>::infinity()),
    ymin_(std::numeric_limits<double>::infinity()), ymax_(-std::numeric_limits<double>::infinity())
{
}

void SvgPlot::Grow(double x, double y)
{
  if (!std::isfinite(x) || !std::isfinite(y))
  {
    return;
  }
  xmin_ = std::min(xmin_, x);
  xmax_ = std::max(xmax_, x);
  ymin_ = std::min(ymin_, y);
  ymax_ = std::max(ymax_, y);
}

void SvgPlot::Polyline(const std::vector<std::array<double, 2>> &pts, const PlotStyle &style)
{
  for (const auto &p : pts)
  {
    Grow(p[0], p[1]);
  }
  paths_.push_back({pts, {}, style});
}

void SvgPlot::ColoredPolyline(const std::vector<std::array<double, 2>> &pts,
                              const std::vector<Rgb> &segment_colors, double width)
{
  for (const auto &p : pts)
  {
    Grow(p[0], p[1]);
  }
  PlotStyle style;
  style.width = width;
  paths_.push_back({pts, segment_colors, style});
}

void SvgPlot::Marker(double x, double y, const Rgb &color, double radius)
{
  Grow(x, y);
  dots_.push_back({x, y, color, radius});
}

void SvgPlot::Legend(const std::string &label, const PlotStyle &style)
{
  legend_.emplace_back(label, style);
}

void SvgPlot::PhaseBar() { phase_bar_ = true; }

void SvgPlot::Include(double x0, double y0, double x1, double y1)
{
  Grow(x0, y0);
  Grow(x1, y1);
}

std::string SvgPlot::Render() const
{
  double x0 = xmin_, x1 = xmax_, y0 = ymin_, y1 = ymax_;
  if (!(x0 <= x1))
  {
    x0 = 0.0;
    x1 = 1.0;
  }
  if (!(y0 <= y1))
  {
    y0 = 0.0;
    y1 = 1.0;
  }
  if (x1 - x0 <= 0.0)
  {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 <= 0.0)
  {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double xs = NiceStep(x1 - x0), ys = NiceStep(y1 - y0);
  x0 = std::floor(x0 / xs) * xs;
  x1 = std::ceil(x1 / xs) * xs;
  y0 = std::floor(y0 / ys) * ys;
  y1 = std::ceil(y1 / ys) * ys;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << XmlEscape(title_) << "</text>\n";

  // Grid and ticks.
  s << "<g stroke=\"#e0e0e0\" stroke-width=\"1\">\n";
  for (double t = x0; t <= x1 + 0.5 * xs; t += xs)
  {
    s << "<line x1=\"" << Px(X(t)) << "\" y1=\"" << Px(kTop) << "\" x2=\"" << Px(X(t))
      << "\" y2=\"" << Px(kTop + ph) << "\"/>\n";
  }
  for (double t = y0; t <= y1 + 0.5 * ys; t += ys)
  {
    s << "<line x1=\"" << Px(kLeft) << "\" y1=\"" << Px(Y(t)) << "\" x2=\"" << Px(kLeft + pw)
      << "\" y2=\"" << Px(Y(t)) << "\"/>\n";
  }
  s << "</g>\n";
  s << "<g font-size=\"12\" fill=\"#333\">\n";
  for (double t = x0; t <= x1 + 0.5 * xs; t += xs)
  {
    const double v = std::abs(t) < 1e-12 * xs ? 0.0 : t;
    s << "<text x=\"" << Px(X(t)) << "\" y=\"" << Px(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << TickLabel(v) << "</text>\n";
  }
  for (double t = y0; t <= y1 + 0.5 * ys; t += ys)
  {
    const double v = std::abs(t) < 1e-12 * ys ? 0.0 : t;
    s << "<text x=\"" << Px(kLeft - 8) << "\" y=\"" << Px(Y(t) + 4)
      << "\" text-anchor=\"end\">" << TickLabel(v) << "</text>\n";
  }
  s << "</g>\n";
  s << "<rect x=\"" << Px(kLeft) << "\" y=\"" << Px(kTop) << "\" width=\"" << Px(pw)
    << "\" height=\"" << Px(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  s << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"" << Px(kHeight - 16)
    << "\" text-anchor=\"middle\" font-size=\"14\">" << XmlEscape(xlabel_) << "</text>\n";
  s << "<text x=\"18\" y=\"" << Px(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"14\" "
    << "transform=\"rotate(-90 18 " << Px(kTop + ph / 2) << ")\">" << XmlEscape(ylabel_)
    << "</text>\n";

  s << "<g fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  for (const Path &path : paths_)
  {
    if (path.pts.size() < 2)
    {
      continue;
    }
    if (path.colors.empty())
    {
      s << "<polyline stroke=\"" << path.style.color.Hex() << "\" stroke-width=\""
        << Px(path.style.width) << "\"";
      if (path.style.dashed)
      {
        s << " stroke-dasharray=\"6 4\"";
      }
      s << " points=\"";
      for (std::size_t k = 0; k < path.pts.size(); k++)
      {
        s << (k ? " " : "") << Px(X(path.pts[k][0])) << "," << Px(Y(path.pts[k][1]));
      }
      s << "\"/>\n";
      continue;
    }
    for (std::size_t k = 0; k + 1 < path.pts.size(); k++)
    {
      const Rgb c = k < path.colors.size() ? path.colors[k] : kNeutralGray;
      s << "<line stroke=\"" << c.Hex() << "\" stroke-width=\"" << Px(path.style.width)
        << "\" x1=\"" << Px(X(path.pts[k][0])) << "\" y1=\"" << Px(Y(path.pts[k][1]))
        << "\" x2=\"" << Px(X(path.pts[k + 1][0])) << "\" y2=\"" << Px(Y(path.pts[k + 1][1]))
        << "\"/>\n";
    }
  }
  s << "</g>\n";
  for (const Dot &d : dots_)
  {
    s << "<circle cx=\"" << Px(X(d.x)) << "\" cy=\"" << Px(Y(d.y)) << "\" r=\"" << Px(d.radius)
      << "\" fill=\"" << d.color.Hex() << "\"/>\n";
  }

  // Legend column on the right.
  double ly = kTop + 12;
  const double lx = kLeft + pw + 16;
  s << "<g font-size=\"12\">\n";
  for (const auto &[label, style] : legend_)
  {
    s << "<line x1=\"" << Px(lx) << "\" y1=\"" << Px(ly) << "\" x2=\"" << Px(lx + 24)
      << "\" y2=\"" << Px(ly) << "\" stroke=\"" << style.color.Hex() << "\" stroke-width=\""
      << Px(style.width) << "\"" << (style.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    s << "<text x=\"" << Px(lx + 30) << "\" y=\"" << Px(ly + 4) << "\">" << XmlEscape(label)
      << "</text>\n";
    ly += 18;
  }
  if (phase_bar_)
  {
    ly += 10;
    s << "<text x=\"" << Px(lx) << "\" y=\"" << Px(ly) << "\">arg (q1/q2)</text>\n";
    ly += 8;
    const int cells = 48;
    const double w = 150.0 / cells;
    for (int k = 0; k < cells; k++)
    {
      const double phase = -std::numbers::pi + (k + 0.5) * 2.0 * std::numbers::pi / cells;
      s << "<rect x=\"" << Px(lx + k * w) << "\" y=\"" << Px(ly) << "\" width=\"" << Px(w + 0.2)
        << "\" height=\"12\" fill=\"" << PhaseColor(phase).Hex() << "\"/>\n";
    }
    s << "<text x=\"" << Px(lx) << "\" y=\"" << Px(ly + 26) << "\">-π</text>\n";
    s << "<text x=\"" << Px(lx + 75) << "\" y=\"" << Px(ly + 26)
      << "\" text-anchor=\"middle\">0</text>\n";
    s << "<text x=\"" << Px(lx + 150) << "\" y=\"" << Px(ly + 26)
      << "\" text-anchor=\"end\">π</text>\n";
    ly += 44;
    s << "<rect x=\"" << Px(lx) << "\" y=\"" << Px(ly - 10) << "\" width=\"12\" height=\"12\" fill=\""
      << kNeutralGray.Hex() << "\"/>\n";
    s << "<text x=\"" << Px(lx + 18) << "\" y=\"" << Px(ly) << "\">phase undefined</text>\n";
  }
  s << "</g>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace capres
