// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <numbers>
#include <string>
#include "capres/config.hpp"
#include "capres/errors.hpp"

using namespace capres;

namespace
{

const char *kBase = R"(# dimer
name = t
model = leading_order
refinement = 2
beta = 0.5,-0.1
beta_reference_sphere = 1
seed = 9

[sphere]
center = 0, 0, -0.5
radius = 0.2
cr = 1

[sphere]
center = 0, 0, 0.5
radius = 0.2
cr = 1
)";

std::string ErrorOf(const std::string &text)
{
  try
  {
    ParseConfig(text, "f.cfg");
  }
  catch (const ConfigError &e)
  {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parses globals and spheres")
{
  const ExperimentConfig c = ParseConfig(kBase);
  CHECK(c.name == "t");
  CHECK(c.refinement == 2);
  CHECK(c.seed == 9u);
  CHECK(c.system.Size() == 2);
  CHECK(c.system.spheres[1].center.z() == 0.5);
  CHECK(c.beta_input == cplx(0.5, -0.1));
  const double vol = 4.0 / 3.0 * std::numbers::pi * 0.008;
  CHECK(std::abs(c.system.beta - cplx(0.5, -0.1) / (vol * vol)) < 1e-9 * std::abs(c.system.beta));
  CHECK(c.amplitude_count == 200);
}

TEST_CASE("echo round-trips")
{
  const ExperimentConfig c = ParseConfig(kBase);
  const std::string echo = EchoConfig(c);
  const ExperimentConfig d = ParseConfig(echo, "echo");
  CHECK(EchoConfig(d) == echo);
  CHECK(d.system.beta == c.system.beta);
  CHECK(echo.find("# beta after scaling") != std::string::npos);
}

TEST_CASE("errors carry file, line and column")
{
  std::string text = kBase;
  text.replace(text.find("seed = 9"), 8, "  sed = 9");
  CHECK(ErrorOf(text).find("f.cfg:7:3") != std::string::npos);
  CHECK(ErrorOf("name = a\nname = b\n").find("f.cfg:2:") != std::string::npos);
  CHECK(ErrorOf("name a\n").find("f.cfg:1:") != std::string::npos);
  CHECK(ErrorOf("refinement = x\n[sphere]\ncenter=0,0,0\nradius=1\n").find("refinement") !=
        std::string::npos);
}

TEST_CASE("semantic validation")
{
  std::string overlap = kBase;
  overlap.replace(overlap.find("0, 0, 0.5"), 9, "0, 0, -0.3");
  CHECK_FALSE(ErrorOf(overlap).empty());
  std::string kerr = kBase;
  kerr.replace(kerr.find("leading_order"), 13, "kerr_pencil\ndelta = 0");
  CHECK(ErrorOf(kerr).find("delta") != std::string::npos);
  std::string cr = kBase;
  cr.replace(cr.rfind("cr = 1"), 6, "cr = 2");
  CHECK_FALSE(ErrorOf(cr).empty());
  std::string ref = kBase;
  ref.replace(ref.find("beta_reference_sphere = 1"), 25, "beta_reference_sphere = 5");
  CHECK(ErrorOf(ref).find("beta_reference_sphere") != std::string::npos);
  CHECK_FALSE(ErrorOf("name = x\n").empty());
  CHECK_THROWS_AS(LoadConfig("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("bundled configurations load")
{
  for (const char *n : {"fig1", "fig2_r210", "fig2_r220", "example"})
  {
    CHECK_NOTHROW(LoadConfig(std::string(CAPRES_CONFIG_DIR) + "/" + n + ".cfg"));
  }
}
