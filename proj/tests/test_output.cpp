// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include "capres/errors.hpp"
#include "capres/output.hpp"

using namespace capres;

TEST_CASE("numbers round-trip exactly")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; k++)
  {
    const double x = u(rng) * std::pow(10.0, (k % 40) - 20);
    const std::string s = FormatNumber(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(FormatNumber(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(FormatNumber(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(FormatNumber(0.5) == "0.5");
}

TEST_CASE("csv rendering and quoting")
{
  CsvTable t({"a", "b", "c"});
  t.Row().Add(1).Add(0.25).Add(std::string("x,y"));
  t.Row().Add(2).Add(-1.0).Add(std::string("say \"hi\""));
  CHECK(t.Rows() == 2);
  CHECK(t.Render() == "a,b,c\n1,0.25,\"x,y\"\n2,-1,\"say \"\"hi\"\"\"\n");
  t.Row().Add(3);
  CHECK_THROWS_AS(t.Render(), Error);
}

TEST_CASE("files are written with parent directories")
{
  const auto dir = std::filesystem::temp_directory_path() / "capres_output_test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "a" / "b.txt").string();
  WriteFile(path, "hello\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "hello\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("colors")
{
  CHECK(PhaseColor(-M_PI).Hex() == "#e60000");
  CHECK(PhaseColor(M_PI).Hex() == PhaseColor(-M_PI).Hex());
  CHECK(PhaseColor(0.0).Hex() != PhaseColor(-M_PI).Hex());
  CHECK(kNeutralGray.Hex() == "#969696");
  CHECK(CategoryColor(0).Hex() == CategoryColor(10).Hex());
}

TEST_CASE("svg plot is well formed")
{
  SvgPlot plot("t <1>", "x", "y");
  plot.Polyline({{0.0, 0.0}, {1.0, 2.0}}, {CategoryColor(1), 1.5, true});
  plot.ColoredPolyline({{0.0, 1.0}, {0.5, 1.5}, {1.0, 0.5}}, {PhaseColor(0.1), PhaseColor(2.0)});
  plot.Marker(0.5, 0.5, kNeutralGray);
  plot.Legend("a & b", {CategoryColor(1)});
  plot.PhaseBar();
  const std::string svg = plot.Render();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("t &lt;1&gt;") != std::string::npos);
  CHECK(svg.find("a &amp; b") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(XmlEscape("\"<&>\"") == "&quot;&lt;&amp;&gt;&quot;");
}
