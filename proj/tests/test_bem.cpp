// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <functional>
#include <numbers>
#include "capres/bem.hpp"
#include "capres/oracles.hpp"

using namespace capres;

namespace
{

double AdaptiveSimpson(const std::function<double(double)> &f, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
  {
    return left + right + (left + right - whole) / 15.0;
  }
  return AdaptiveSimpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         AdaptiveSimpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double Integrate(const std::function<double(double)> &f, double a, double b, double tol)
{
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return AdaptiveSimpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

// Polar coordinates centred at x: the integral of 1/|x - y| over each sub-triangle
// (x, p, q) is the integral over the angle of the ray length to the edge pq.
double PolarPotential(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &x)
{
  const std::array<Vec3, 3> v = {a, b, c};
  double sum = 0.0;
  for (int k = 0; k < 3; k++)
  {
    const Vec3 p = v[k] - x, q = v[(k + 1) % 3] - x;
    const Vec3 e1 = p.normalized();
    const Vec3 n = p.cross(q).normalized();
    const Vec3 e2 = n.cross(e1);
    const double theta = std::atan2(q.dot(e2), q.dot(e1));
    const Vec3 edge = q - p;
    auto ray = [&](double t) {
      const Vec3 dir = std::cos(t) * e1 + std::sin(t) * e2;
      // Solve s dir = p + u edge in the plane.
      const double det = dir.cross(edge).dot(n);
      return p.cross(edge).dot(n) / det;
    };
    sum += Integrate(ray, 0.0, theta, 1e-13);
  }
  return sum;
}

}  // namespace

TEST_CASE("closed-form self term matches polar integration")
{
  const Vec3 a(0.0, 0.0, 0.0), b(1.0, 0.1, 0.0), c(0.3, 0.8, 0.0);
  for (const Vec3 &x : {Vec3((a + b + c) / 3.0), Vec3(0.4, 0.2, 0.0), Vec3(0.2, 0.3, 0.0)})
  {
    const double closed = FlatTrianglePotentialInPlane(a, b, c, x);
    CHECK(std::abs(closed - PolarPotential(a, b, c, x)) / closed < 1e-8);
  }
  // Rotated out of the coordinate planes.
  const Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Vec3(1.0, 2.0, -0.5).normalized()).toRotationMatrix();
  const Vec3 ra = R * a, rb = R * b, rc = R * c, rx = R * Vec3((a + b + c) / 3.0);
  CHECK(FlatTrianglePotentialInPlane(ra, rb, rc, rx) ==
        doctest::Approx(PolarPotential(ra, rb, rc, rx)).epsilon(1e-8));
}

TEST_CASE("quadrature rule is accurate away from the panel")
{
  const Vec3 a(0.0, 0.0, 0.0), b(0.1, 0.0, 0.0), c(0.0, 0.1, 0.0);
  const Vec3 x(0.03, 0.03, 1.0);
  const double area = 0.005;
  const double far = area / (x - (a + b + c) / 3.0).norm();
  CHECK(TriangleQuadrature(a, b, c, x) == doctest::Approx(far).epsilon(1e-4));
  const Vec3 x2(0.03, 0.03, 0.0);
  const double q = TriangleQuadrature(a, b, c, x2 + Vec3(0, 0, 5.0));
  CHECK(q == doctest::Approx(area / 5.0).epsilon(1e-4));
}

TEST_CASE("single sphere capacitance converges to 4 pi r")
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3(1.0, 2.0, 3.0), 0.5}};
  const double exact = oracle::SphereCapacitance(0.5);
  double prev = 1e300;
  for (int r = 1; r <= 3; r++)
  {
    const double err = std::abs(ComputeCapacitance(sys, r).C(0, 0) - exact) / exact;
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("dimer capacitance: symmetry, signs and image-charge agreement")
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3(0, 0, -0.5), 0.2}, {Vec3(0, 0, 0.5), 0.25}};
  const CapacitanceSet set = ComputeCapacitance(sys, 3);
  const Eigen::MatrixXd &C = set.C;
  CHECK(C(0, 0) > 0.0);
  CHECK(C(1, 1) > 0.0);
  CHECK(C(0, 1) < 0.0);
  CHECK(std::abs(C(0, 1) - C(1, 0)) / std::abs(C(0, 1)) < 1e-2);
  CHECK(C(0, 0) + C(0, 1) > 0.0);
  const Eigen::Matrix2d ref = oracle::TwoSphereCapacitance(0.2, 0.25, 1.0, 1e-15);
  for (int i = 0; i < 2; i++)
  {
    for (int j = 0; j < 2; j++)
    {
      CHECK(std::abs(C(i, j) - ref(i, j)) / std::abs(ref(i, j)) < 1e-2);
    }
  }
}

TEST_CASE("generalized capacitance scaling")
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3(0, 0, -0.5), 0.2}, {Vec3(0, 0, 0.5), 0.3}};
  sys.cr = {1.5, 0.5};
  Eigen::MatrixXd C(2, 2);
  C << 3.0, -1.0, -1.0, 4.0;
  const CapacitanceSet set = GeneralizedCapacitance(C, sys);
  const Eigen::VectorXd vol = sys.Volumes();
  CHECK(set.Cgen(0, 1) == doctest::Approx(2.25 / vol(0) * -1.0));
  CHECK(set.Cgen(1, 1) == doctest::Approx(0.25 / vol(1) * 4.0));
}

TEST_CASE("corrected near-field assembly stays close to the plain rule")
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3::Zero(), 1.0}};
  AssemblyOptions near;
  near.near_levels = 2;
  const double plain = ComputeCapacitance(sys, 2).C(0, 0);
  const double refined = ComputeCapacitance(sys, 2, near).C(0, 0);
  CHECK(std::abs(plain - refined) / plain < 5e-3);
}
