// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_OUTPUT_HPP
#define CAPRES_OUTPUT_HPP

#include <array>
#include <string>
#include <vector>

namespace capres
{

// Shortest-round-trip-safe text for a double: 17 significant digits, '.' decimal
// separator, "nan" / "inf" / "-inf" for non-finite values. Locale-independent.
std::string FormatNumber(double x);

class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header);

  // Starts a new row; cells are appended with Add.
  CsvTable &Row();
  CsvTable &Add(double x);
  CsvTable &Add(long long x);
  CsvTable &Add(int x) { return Add(static_cast<long long>(x)); }
  CsvTable &Add(const std::string &text);

  std::size_t Rows() const { return rows_.size(); }
  // Throws Error when a row's width differs from the header.
  std::string Render() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes `content` to `path`, creating parent directories. Throws Error on failure.
void WriteFile(const std::string &path, const std::string &content);

struct Rgb
{
  int r = 0, g = 0, b = 0;
  std::string Hex() const;
};

// Cyclic hue for a phase in (-pi, pi].
Rgb PhaseColor(double phase);
inline constexpr Rgb kNeutralGray{150, 150, 150};
// Qualitative palette indexed modulo its size.
Rgb CategoryColor(int index);

struct PlotStyle
{
  Rgb color;
  double width = 1.6;
  bool dashed = false;
};

// Minimal self-contained SVG line plot with linear axes.
class SvgPlot
{
public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel);

  void Polyline(const std::vector<std::array<double, 2>> &pts, const PlotStyle &style);
  // Polyline whose segments carry individual colors (size pts.size() - 1).
  void ColoredPolyline(const std::vector<std::array<double, 2>> &pts,
                       const std::vector<Rgb> &segment_colors, double width = 1.6);
  void Marker(double x, double y, const Rgb &color, double radius = 3.0);
  void Legend(const std::string &label, const PlotStyle &style);
  // Adds a horizontal hue bar for phase in (-pi, pi] below the legend.
  void PhaseBar();
  // Forces the data bounds to include the given box.
  void Include(double x0, double y0, double x1, double y1);

  std::string Render() const;

private:
  struct Path
  {
    std::vector<std::array<double, 2>> pts;
    std::vector<Rgb> colors;
    PlotStyle style;
  };
  struct Dot
  {
    double x, y;
    Rgb color;
    double radius;
  };
  void Grow(double x, double y);

  std::string title_, xlabel_, ylabel_;
  std::vector<Path> paths_;
  std::vector<Dot> dots_;
  std::vector<std::pair<std::string, PlotStyle>> legend_;
  bool phase_bar_ = false;
  double xmin_, xmax_, ymin_, ymax_;
};

// Escapes &, <, >, " for XML text and attributes.
std::string XmlEscape(const std::string &text);

}  // namespace capres

#endif  // CAPRES_OUTPUT_HPP
