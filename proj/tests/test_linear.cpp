// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <numbers>
#include "capres/errors.hpp"
#include "capres/linear.hpp"

using namespace capres;

namespace
{

Eigen::MatrixXd Mat(double a, double b, double c, double d)
{
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

// Hand-rolled first-order correction of a simple eigenvalue, without the library.
cplx Omega1Reference(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, double c0,
                     const Eigen::VectorXcd &q0, const Eigen::VectorXcd &w)
{
  const Eigen::MatrixXd K = cgen * Eigen::MatrixXd::Ones(C.rows(), C.cols()) * C;
  const Eigen::VectorXcd Kq = K.cast<cplx>() * q0;
  const Eigen::VectorXcd proj = (w.transpose() * Kq)(0) / (w.transpose() * q0)(0) * q0;
  return cplx(0.0, -1.0) / (8.0 * std::numbers::pi * c0) * q0.dot(proj) / q0.squaredNorm();
}

}  // namespace

TEST_CASE("eigen system normalization and left/right duality")
{
  const Eigen::MatrixXd cgen = Mat(78.0, -16.0, -14.0, 71.0);
  const EigenSystem es = ComputeEigenSystem(cgen);
  CHECK(es.values(0).real() < es.values(1).real());
  CHECK_FALSE(es.degenerate);
  for (int k = 0; k < 2; k++)
  {
    const Eigen::VectorXcd v = es.right.col(k);
    CHECK(v.norm() == doctest::Approx(1.0));
    Eigen::Index big;
    v.cwiseAbs().maxCoeff(&big);
    CHECK(v(big).imag() == 0.0);
    CHECK(v(big).real() > 0.0);
    CHECK((cgen.cast<cplx>() * v - es.values(k) * v).norm() < 1e-12);
  }
  CHECK((es.left * es.right - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("projection is idempotent and annihilates the other eigenvector")
{
  const Eigen::MatrixXd cgen = Mat(5.0, 1.0, 2.0, 3.0);
  const EigenSystem es = ComputeEigenSystem(cgen);
  const EigenPair pair = SelectPair(es, 1);
  const Eigen::VectorXcd x = Eigen::VectorXcd::Random(2);
  const Eigen::VectorXcd px = Project(pair, x);
  CHECK((Project(pair, px) - px).norm() < 1e-12 * px.norm());
  CHECK(Project(pair, es.right.col(0)).norm() < 1e-12);
  CHECK((Project(pair, es.right.col(1)) - Eigen::VectorXcd(es.right.col(1))).norm() < 1e-12);
}

TEST_CASE("degenerate spectrum refuses to select a pair")
{
  const EigenSystem es = ComputeEigenSystem(Mat(2.0, 0.0, 0.0, 2.0));
  CHECK(es.degenerate);
  CHECK_THROWS_AS(SelectPair(es, 0), NumericalError);
}

TEST_CASE("omega1 formulas against an independent evaluation")
{
  const Eigen::MatrixXd C = Mat(3.1, -0.6, -0.6, 3.1);
  const Eigen::MatrixXd cgen = Mat(78.0, -15.5, -15.5, 78.0);
  const EigenSystem es = ComputeEigenSystem(cgen);
  for (int k = 0; k < 2; k++)
  {
    const EigenPair pair = SelectPair(es, k);
    const cplx ref = Omega1Reference(C, cgen, 1.3, pair.q0, pair.w);
    CHECK(std::abs(Omega1Linear(C, cgen, 1.3, pair) - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
    CHECK(std::abs(Omega1Linear(C, cgen, 1.3, pair, -1) + ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
    const cplx kerr = Omega1Kerr(C, cgen, 1.3, 1.0, 0.0, pair, 0.2 * pair.q0);
    CHECK(std::abs(kerr - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
  }
  // The antisymmetric mode of an equal dimer does not couple through the J term.
  const EigenPair anti = SelectPair(es, 1);
  CHECK(std::abs(Omega1Linear(C, cgen, 1.0, anti)) < 1e-12);
}

TEST_CASE("Kerr correction scales with the amplitude squared")
{
  const Eigen::MatrixXd C = Mat(3.0, 0.0, 0.0, 3.0);
  const Eigen::MatrixXd cgen = Mat(60.0, 0.0, 0.0, 80.0);
  const EigenPair pair = SelectPair(ComputeEigenSystem(cgen), 0);
  const cplx beta(0.0, -4.0);
  const cplx a = Omega1Kerr(C, cgen, 1.0, 1.0, beta, pair, 0.1 * pair.q0);
  const cplx b = Omega1Kerr(C, cgen, 1.0, 1.0, beta, pair, 0.2 * pair.q0);
  const cplx lin = Omega1Kerr(C, cgen, 1.0, 1.0, 0.0, pair, 0.1 * pair.q0);
  CHECK(std::abs((b - lin) - 4.0 * (a - lin)) < 1e-12 * std::abs(b));
}

TEST_CASE("order study of a dimer")
{
  const Eigen::MatrixXd C = Mat(3.1, -0.6, -0.6, 3.1);
  const Eigen::MatrixXd cgen = C * (1.0 / (4.0 / 3.0 * std::numbers::pi * 0.008));
  const auto modes = LinearAsymptotics(C, cgen, 1.0);
  REQUIRE(modes.size() == 2);
  int radiative = 0;
  for (const auto &m : modes)
  {
    CHECK(std::abs(m.omega0 * m.omega0 - m.lambda) < 1e-10 * std::abs(m.lambda));
    if (m.radiative)
    {
      radiative++;
      CHECK(m.slope_with_omega1 > kSlopeLow);
      CHECK(m.slope_with_omega1 < kSlopeHigh);
      CHECK(m.slope_without_omega1 > 1.4);
      CHECK(m.slope_without_omega1 < 1.6);
    }
    else
    {
      CHECK(std::abs(m.omega1) < 1e-10);
    }
  }
  CHECK(radiative == 1);
}

TEST_CASE("sign resolution of a single resonator")
{
  Eigen::MatrixXd C(1, 1), cgen(1, 1);
  C << 2.5;
  cgen << 75.0;
  const SignResolution s = ResolveSignConventions(C, cgen, 1.0);
  CHECK(s.linear.pencil_sign != 0);
  CHECK(s.kerr.pencil_sign != 0);
  CHECK(s.linear.printed_pencil_sign == -1);
  CHECK(s.kerr.printed_pencil_sign == 1);
  for (const ModelSigns *m : {&s.linear, &s.kerr})
  {
    bool found = false;
    for (const auto &c : m->combinations)
    {
      if (c.pencil_sign == m->pencil_sign && c.omega1_sign == m->omega1_sign)
      {
        found = true;
        CHECK(c.consistent);
        CHECK(c.min_slope > kSlopeLow);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("pencil minimum singular value vanishes at the exact resonance to leading order")
{
  Eigen::MatrixXd C(1, 1), cgen(1, 1);
  C << 2.5;
  cgen << 75.0;
  const double delta = 1e-4;
  const cplx w0 = std::sqrt(cplx(75.0));
  const double off = PencilMinSingular(1.1 * w0 * std::sqrt(delta), delta, C, cgen, 1.0, 1);
  const double on = PencilMinSingular(w0 * std::sqrt(delta), delta, C, cgen, 1.0, 1);
  CHECK(on < 0.1 * off);
}
