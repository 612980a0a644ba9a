// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <cmath>
#include <numbers>
#include <random>
#include "capres/errors.hpp"
#include "capres/linear.hpp"
#include "capres/nonlinear.hpp"
#include "capres/oracles.hpp"

using namespace capres;

namespace
{

NonlinearParams SymmetricDimer()
{
  NonlinearParams p;
  p.cgen.resize(2, 2);
  p.cgen << 77.974, -15.569, -15.569, 77.974;
  p.c.resize(2, 2);
  p.c << 2.6117, -0.52149, -0.52149, 2.6117;
  p.beta = cplx(0.0, -89.05);
  return p;
}

NonlinearParams AsymmetricDimer()
{
  NonlinearParams p = SymmetricDimer();
  p.cgen << 78.1586, -16.3879, -14.1565, 70.8790;
  return p;
}

NonlinearParams Kerr(NonlinearParams p)
{
  p.model = NonlinearModel::kKerrPencil;
  p.delta = 1e-3;
  p.pencil_sign = 1;
  return p;
}

// Residual written out from the model definitions, independently of the library.
Eigen::VectorXcd ReferenceResidual(const Eigen::VectorXcd &q, cplx s, const NonlinearParams &p)
{
  const Eigen::Index n = q.size();
  Eigen::VectorXcd r(n);
  const Eigen::MatrixXcd G = p.cgen.cast<cplx>();
  if (p.model == NonlinearModel::kLeadingOrder)
  {
    for (Eigen::Index i = 0; i < n; i++)
    {
      cplx acc = 0.0;
      for (Eigen::Index j = 0; j < n; j++)
      {
        acc += G(i, j) * q(j);
      }
      r(i) = acc - s * (q(i) - p.beta * p.cr * p.cr * std::norm(q(i)) * q(i));
    }
    return r;
  }
  const Eigen::MatrixXd K = p.cgen * Eigen::MatrixXd::Ones(n, n) * p.c;
  const cplx coup = static_cast<double>(p.pencil_sign) * s * p.delta *
                    cplx(0.0, 1.0 / (4.0 * std::numbers::pi * p.c0));
  for (Eigen::Index i = 0; i < n; i++)
  {
    cplx acc = s * s * q(i);
    for (Eigen::Index j = 0; j < n; j++)
    {
      acc += (-p.delta * G(i, j) + coup * K(i, j)) * q(j);
    }
    acc += std::norm(s) * s * cplx(0.0, 1.0) * p.beta * p.cr * p.cr * std::norm(q(i)) * q(i);
    r(i) = acc;
  }
  return r;
}

}  // namespace

TEST_CASE("residual matches the model definitions")
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (const NonlinearParams &p : {SymmetricDimer(), Kerr(AsymmetricDimer())})
  {
    for (int t = 0; t < 10; t++)
    {
      const Eigen::Vector2cd q(cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)));
      const cplx s(nd(rng) + 5.0, nd(rng));
      CHECK((Residual(q, s, p) - ReferenceResidual(q, s, p)).norm() <
            1e-12 * (1.0 + ReferenceResidual(q, s, p).norm() + 1e3 * q.squaredNorm()));
    }
  }
}

TEST_CASE("realified Jacobian agrees with central differences")
{
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (const NonlinearParams &p : {SymmetricDimer(), Kerr(AsymmetricDimer())})
  {
    const bool kerr = p.model == NonlinearModel::kKerrPencil;
    for (int t = 0; t < 50; t++)
    {
      const Eigen::Vector2cd q(cplx(nd(rng), nd(rng)) * 0.3, cplx(nd(rng), nd(rng)) * 0.3);
      const cplx s = kerr ? cplx(0.25 + 0.01 * nd(rng), 0.01 * nd(rng))
                          : cplx(60.0 + nd(rng), nd(rng));
      const Eigen::MatrixXd J = RealifiedJacobian(q, s, p);
      REQUIRE(J.rows() == 4);
      REQUIRE(J.cols() == 6);
      double worst = 0.0;
      for (int k = 0; k < 6; k++)
      {
        const double h = 1e-6 * (k < 4 ? 1.0 : std::abs(s));
        Eigen::Vector2cd qp = q, qm = q;
        cplx sp = s, sm = s;
        const cplx d = (k < 2 || k == 4) ? cplx(h, 0.0) : cplx(0.0, h);
        if (k < 4)
        {
          qp(k % 2) += d;
          qm(k % 2) -= d;
        }
        else
        {
          sp += d;
          sm -= d;
        }
        const Eigen::VectorXcd fd =
            (ReferenceResidual(qp, sp, p) - ReferenceResidual(qm, sm, p)) / (2.0 * h);
        for (int i = 0; i < 2; i++)
        {
          worst = std::max(worst, std::abs(J(i, k) - fd(i).real()));
          worst = std::max(worst, std::abs(J(i + 2, k) - fd(i).imag()));
        }
      }
      CHECK(worst < 1e-6 * J.cwiseAbs().maxCoeff());
      const Eigen::MatrixXd cols = RealifiedJacobian(q, s, p, {5, 0});
      CHECK((cols.col(0) - J.col(5)).norm() == 0.0);
      CHECK((cols.col(1) - J.col(0)).norm() == 0.0);
    }
  }
  CHECK(UnknownColumn(RealUnknown::kImQ, 1, 2) == 3);
  CHECK(UnknownColumn(RealUnknown::kImSpectral, 0, 2) == 5);
}

TEST_CASE("monomer solution matches the closed form")
{
  NonlinearParams p;
  p.cgen.resize(1, 1);
  p.cgen << 75.0;
  p.c.resize(1, 1);
  p.c << 2.5;
  p.beta = cplx(0.5, -3.0);
  Eigen::VectorXcd q0(1);
  q0 << cplx(0.2, 0.1);
  const BranchPoint pt = NewtonSolve(q0, 70.0, p, Gauge{}, Constraint::Amplitude(0.3));
  CHECK(pt.amplitude == doctest::Approx(0.3));
  CHECK(pt.q(0).imag() == 0.0);
  CHECK(pt.q(0).real() > 0.0);
  const cplx ref = oracle::MonomerOmegaSq(75.0, p.beta, 1.0, 0.3);
  CHECK(std::abs(pt.omega_sq - ref) < 1e-10 * std::abs(ref));
  CHECK(pt.residual_norm < 1e-11);
}

TEST_CASE("symmetric families follow the closed form along continuation")
{
  const NonlinearParams p = SymmetricDimer();
  const EigenSystem es = ComputeEigenSystem(p.cgen);
  ContinuationLimits lim;
  lim.amplitude_cap = 0.6;
  for (int k = 0; k < 2; k++)
  {
    Eigen::VectorXcd v = es.right.col(k) * 0.02;
    const BranchPoint seed = NewtonSolve(v, es.values(k), p, Gauge{}, Constraint::Amplitude(0.02));
    const Branch b = ContinueBranch(seed, p, {}, lim, 1);
    CHECK(b.termination == Termination::kAmplitudeCap);
    CHECK(b.points.back().amplitude >= 0.6);
    for (const BranchPoint &pt : b.points)
    {
      const double a = std::abs(pt.q(0));
      const cplx ref = oracle::SymmetricDimerOmegaSq(es.values(k).real(), p.beta, 1.0, a);
      CHECK(std::abs(pt.omega_sq - ref) < 1e-8 * std::abs(ref));
      CHECK(std::abs(std::abs(pt.q(0)) - std::abs(pt.q(1))) < 1e-9);
    }
  }
}

TEST_CASE("continuation in the other direction reaches the floor")
{
  const NonlinearParams p = SymmetricDimer();
  const EigenSystem es = ComputeEigenSystem(p.cgen);
  Eigen::VectorXcd v = es.right.col(0) * 0.3;
  const BranchPoint seed = NewtonSolve(v, es.values(0), p, Gauge{}, Constraint::Amplitude(0.3));
  ContinuationLimits lim;
  lim.amplitude_floor = 0.05;
  const Branch b = ContinueBranch(seed, p, {}, lim, -1);
  CHECK(b.points.back().amplitude <= 0.05 + 1e-12);
}

TEST_CASE("gauge, swap and conjugation symmetries of solutions")
{
  const NonlinearParams p = SymmetricDimer();
  SweepOptions o;
  o.amplitudes = {0.2};
  o.starts = 24;
  const SweepResult r = MultistartSweep(p, o);
  REQUIRE(!r.per_amplitude[0].empty());
  for (const SweepSeed &s : r.per_amplitude[0])
  {
    const BranchPoint &pt = s.point;
    const cplx rot = std::polar(1.0, 0.9);
    CHECK(ScaledResidualNorm(rot * pt.q, pt.omega_sq, p) < 1e-10);
    CHECK((Canonicalize(rot * pt.q) - pt.q).norm() < 1e-12);
    const BranchPoint sw = SwapSolution(pt, p);
    CHECK(ScaledResidualNorm(sw.q, sw.omega_sq, p) < 1e-11);
    // Conjugate solutions solve the problem with conjugated nonlinearity.
    NonlinearParams pc = p;
    pc.beta = std::conj(p.beta);
    CHECK(ScaledResidualNorm(pt.q.conjugate(), std::conj(pt.omega_sq), pc) < 1e-11);
  }
}

TEST_CASE("Kerr pencil with zero nonlinearity reproduces the linear asymptotics")
{
  NonlinearParams p = Kerr(SymmetricDimer());
  p.beta = 0.0;
  p.delta = 1e-5;
  const ModelSigns signs = ResolveSignConventions(p.c, p.cgen, p.c0).kerr;
  p.pencil_sign = signs.pencil_sign;
  const EigenSystem es = ComputeEigenSystem(p.cgen);
  for (int k = 0; k < 2; k++)
  {
    const EigenPair pair = SelectPair(es, k);
    const Eigen::VectorXcd v = pair.q0 * 0.1;
    const cplx w0 = std::sqrt(pair.lambda);
    const cplx w1 = Omega1Kerr(p.c, p.cgen, p.c0, p.cr, 0.0, pair, v, signs.omega1_sign);
    const BranchPoint pt =
        NewtonSolve(v, w0 * std::sqrt(p.delta), p, Gauge{}, Constraint::Amplitude(0.1));
    const cplx pred = w0 * std::sqrt(p.delta) + w1 * p.delta;
    CHECK(std::abs(pt.omega - pred) < 1e-2 * p.delta * std::abs(w0));
    CHECK(std::abs(pt.omega * pt.omega - pt.omega_sq) < 1e-12 * std::abs(pt.omega_sq));
  }
}

TEST_CASE("Newton reports failures")
{
  const NonlinearParams p = SymmetricDimer();
  CHECK_THROWS_AS(NewtonSolve(Eigen::VectorXcd::Zero(2), 60.0, p, Gauge{},
                              Constraint::Amplitude(0.1)),
                  NewtonError);
  NonlinearParams bad = Kerr(p);
  bad.c.resize(3, 3);
  CHECK_THROWS_AS(bad.Validate(), DomainError);
  bad = p;
  bad.cr = 0.0;
  CHECK_THROWS_AS(bad.Validate(), DomainError);
}

TEST_CASE("sweep is deterministic and finds the linear families at low amplitude")
{
  const NonlinearParams p = AsymmetricDimer();
  SweepOptions o;
  o.amplitudes = AmplitudeGrid(0.015, 0.05, 3, false);
  o.starts = 16;
  o.seed = 42;
  const SweepResult a = MultistartSweep(p, o);
  const SweepResult b = MultistartSweep(p, o);
  REQUIRE(a.per_amplitude.size() == 3);
  CHECK(a.per_amplitude[0].size() == 2);
  for (std::size_t k = 0; k < 3; k++)
  {
    REQUIRE(a.per_amplitude[k].size() == b.per_amplitude[k].size());
    for (std::size_t j = 0; j < a.per_amplitude[k].size(); j++)
    {
      CHECK(a.per_amplitude[k][j].point.q == b.per_amplitude[k][j].point.q);
      CHECK(a.per_amplitude[k][j].point.omega_sq == b.per_amplitude[k][j].point.omega_sq);
    }
  }
  CHECK(a.Flatten().size() >= 6);
}

TEST_CASE("amplitude grids")
{
  const auto lin = AmplitudeGrid(0.015, 3.0, 200, false);
  CHECK(lin.size() == 200);
  CHECK(lin.front() == 0.015);
  CHECK(lin.back() == doctest::Approx(3.0));
  CHECK(lin[1] - lin[0] == doctest::Approx(2.985 / 199));
  const auto lg = AmplitudeGrid(0.01, 1.0, 3, true);
  CHECK(lg[1] == doctest::Approx(0.1));
}

TEST_CASE("phase ratio")
{
  BranchPoint pt;
  pt.q = Eigen::Vector2cd(cplx(2.0, 0.0), cplx(0.0, 1.0));
  const auto r = BranchPhaseRatio(pt);
  REQUIRE(r.has_value());
  CHECK(std::abs(*r - cplx(0.0, -1.0)) < 1e-15);
  pt.q = Eigen::Vector2cd(cplx(1.0, 0.0), cplx(0.0, 0.0));
  CHECK_FALSE(BranchPhaseRatio(pt).has_value());
}
