// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <numbers>
#include "capres/errors.hpp"
#include "capres/geometry.hpp"

using namespace capres;

namespace
{

ResonatorSystem Pair(double r1, double r2, double d)
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3(0, 0, -0.5 * d), r1}, {Vec3(0, 0, 0.5 * d), r2}};
  return sys;
}

}  // namespace

TEST_CASE("icosphere panel count and vertex placement")
{
  const SphereSpec s{Vec3(0.3, -0.1, 2.0), 0.7};
  for (int r = 0; r <= 3; r++)
  {
    const SurfaceMesh m = BuildSphereMesh(s, r);
    CHECK(m.Size() == 20u * (1u << (2 * r)));
    CHECK(m.vertex_counts.at(0) == 10u * (1u << (2 * r)) + 2u);
    for (const Panel &p : m.panels)
    {
      for (const Vec3 &v : p.vertices)
      {
        CHECK((v - s.center).norm() == doctest::Approx(s.radius).epsilon(1e-13));
      }
      CHECK(p.normal.dot(p.centroid - s.center) > 0.0);
      CHECK(p.normal.norm() == doctest::Approx(1.0));
      CHECK(p.area > 0.0);
    }
  }
}

TEST_CASE("mesh area converges to the sphere area from below")
{
  const SphereSpec s{Vec3::Zero(), 1.3};
  const double exact = 4.0 * std::numbers::pi * s.radius * s.radius;
  double prev = 1e300;
  for (int r = 0; r <= 4; r++)
  {
    const double err = exact - BuildSphereMesh(s, r).ComponentArea(0);
    CHECK(err > 0.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev / exact < 2e-3);
}

TEST_CASE("system mesh is component-major")
{
  const SurfaceMesh m = BuildSystemMesh(Pair(0.2, 0.3, 1.0), 1);
  CHECK(m.Components() == 2);
  CHECK(m.PanelsOf(0).size() == 80u);
  CHECK(m.PanelsOf(1).front() == 80u);
  CHECK(m.panels[79].component == 0);
  CHECK(m.panels[80].component == 1);
}

TEST_CASE("volumes and wave speed broadcast")
{
  ResonatorSystem sys = Pair(0.2, 0.4, 2.0);
  const Eigen::VectorXd v = sys.Volumes();
  CHECK(v(1) / v(0) == doctest::Approx(8.0));
  CHECK(sys.spheres[0].Volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 0.008));
  CHECK(sys.UniformWaveSpeed());
  CHECK(sys.WaveSpeed(1) == 1.0);
  sys.cr = {1.0, 2.0};
  CHECK_FALSE(sys.UniformWaveSpeed());
  CHECK(sys.WaveSpeed(1) == 2.0);
}

TEST_CASE("separation checks")
{
  const SeparationReport ok = ValidateSeparation(Pair(0.2, 0.2, 1.0));
  CHECK(ok.pass);
  CHECK(ok.min_gap == doctest::Approx(0.6));
  CHECK(ok.pair_i == 0);
  CHECK(ok.pair_j == 1);
  CHECK_NOTHROW(ValidateSystem(Pair(0.2, 0.2, 1.0)));
  CHECK_THROWS_AS(BuildSystemMesh(Pair(0.5, 0.6, 1.0), 0), GeometryError);
  CHECK_THROWS_AS(ValidateSystem(Pair(0.5, 0.5, 1.0)), GeometryError);
  CHECK_THROWS_AS(ValidateSystem(Pair(0.49, 0.5, 1.0)), GeometryError);

  ResonatorSystem bad = Pair(0.2, 0.2, 1.0);
  bad.spheres[0].radius = -1.0;
  CHECK_THROWS_AS(ValidateSystem(bad), GeometryError);
  CHECK_THROWS_AS(ValidateSystem(ResonatorSystem{}), GeometryError);
  ResonatorSystem mono;
  mono.spheres = {{Vec3::Zero(), 1.0}};
  CHECK(ValidateSeparation(mono).pair_i == -1);
}
