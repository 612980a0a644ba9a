// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include "capres/bem.hpp"
#include "capres/errors.hpp"
#include "capres/linear.hpp"
#include "capres/oracles.hpp"
#include "capres/output.hpp"
#include "capres/workbench.hpp"

namespace capres
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRadius = 0.2;
constexpr double kDistance = 1.0;
constexpr int kRefinement = 4;
constexpr int kStarts = 64;
constexpr int kGridCount = 200;
constexpr double kGridMin = 0.015;
constexpr double kGridMax = 3.0;

std::string Num(double x, int digits = 6)
{
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

ResonatorSystem Dimer(double r2)
{
  ResonatorSystem sys;
  sys.spheres = {{Vec3(0.0, 0.0, -0.5 * kDistance), kRadius}, {Vec3(0.0, 0.0, 0.5 * kDistance), r2}};
  return sys;
}

cplx FigureBeta()
{
  const double vol = SphereSpec{Vec3::Zero(), kRadius}.Volume();
  return cplx(0.0, -0.1) / (vol * vol);
}

NonlinearParams LeadingOrder(const CapacitanceSet &set)
{
  NonlinearParams p;
  p.cgen = set.Cgen;
  p.c = set.C;
  p.cr = 1.0;
  p.beta = FigureBeta();
  p.model = NonlinearModel::kLeadingOrder;
  return p;
}

SweepOptions FigureSweep()
{
  SweepOptions o;
  o.amplitudes = AmplitudeGrid(kGridMin, kGridMax, kGridCount, false);
  o.starts = kStarts;
  o.seed = 1;
  return o;
}

double GridStep() { return (kGridMax - kGridMin) / (kGridCount - 1); }

// Shared, lazily computed inputs.
struct Context
{
  std::optional<CapacitanceSet> fig1;
  std::optional<SweepResult> fig1_sweep;
  double sweep_seconds = 0.0;

  const CapacitanceSet &Fig1()
  {
    if (!fig1)
    {
      fig1 = ComputeCapacitance(Dimer(kRadius), kRefinement);
    }
    return *fig1;
  }

  const SweepResult &Fig1Sweep()
  {
    if (!fig1_sweep)
    {
      const auto t0 = std::chrono::steady_clock::now();
      fig1_sweep = MultistartSweep(LeadingOrder(Fig1()), FigureSweep());
      sweep_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return *fig1_sweep;
  }
};

AcceptanceCheck SphereCapacitanceCheck()
{
  AcceptanceCheck c{1, "sphere capacitance", false, "", 0.0};
  ResonatorSystem sys;
  sys.spheres = {{Vec3::Zero(), kRadius}};
  const double exact = oracle::SphereCapacitance(kRadius);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> errs;
  for (int r = 2; r <= kRefinement; r++)
  {
    const CapacitanceSet set = ComputeCapacitance(sys, r);
    errs.push_back(std::abs(set.C(0, 0) - exact) / exact);
  }
  const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.pass = errs.back() < 0.01 && monotone && secs < 30.0;
  c.detail = "rel. errors at refinement 2,3,4 = " + Num(errs[0], 3) + ", " + Num(errs[1], 3) +
             ", " + Num(errs[2], 3) + (monotone ? " (monotone)" : " (not monotone)") +
             "; limit 30 s";
  return c;
}

AcceptanceCheck DimerCapacitanceCheck(Context &ctx)
{
  AcceptanceCheck c{2, "dimer capacitance vs image charges", false, "", 0.0};
  const Eigen::Matrix2d images = oracle::TwoSphereCapacitance(kRadius, kRadius, kDistance, 1e-15);
  const double self = oracle::EqualSpheresSelfSeries(kRadius, kDistance);
  const double mutual = oracle::EqualSpheresMutualSeries(kRadius, kDistance);
  const double full = oracle::EqualSpheresFullSeries(kRadius, kDistance);
  const double series_err =
      std::max({std::abs(images(0, 0) - self) / std::abs(self),
                std::abs(images(0, 1) - mutual) / std::abs(mutual),
                std::abs((images(0, 0) - images(0, 1)) - full) / std::abs(full)});
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::MatrixXd &C = ctx.Fig1().C;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double worst = 0.0;
  for (int i = 0; i < 2; i++)
  {
    for (int j = 0; j < 2; j++)
    {
      worst = std::max(worst, std::abs(C(i, j) - images(i, j)) / std::abs(images(i, j)));
    }
  }
  c.pass = worst < 0.005 && series_err < 1e-10 && secs < 60.0;
  c.detail = "max entrywise rel. error " + Num(worst, 3) + " (limit 0.005); oracle vs series " +
             Num(series_err, 3) + " (limit 1e-10); BEM solve " + Num(secs, 3) + " s (limit 60 s)";
  return c;
}

AcceptanceCheck EigenStructureCheck(Context &ctx)
{
  AcceptanceCheck c{3, "eigenvector alignment", false, "", 0.0};
  const EigenSystem es = ComputeEigenSystem(ctx.Fig1().Cgen);
  const Eigen::Vector2d sym(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const Eigen::Vector2d anti(-1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  double worst = 0.0;
  bool positive = true;
  bool seen_sym = false, seen_anti = false;
  for (int k = 0; k < 2; k++)
  {
    const Eigen::VectorXcd v = es.right.col(k);
    positive = positive && es.values(k).real() > 0.0 && std::abs(es.values(k).imag()) == 0.0;
    // Angle from the orthogonal component; acos loses precision near 1.
    auto perp = [&](const Eigen::Vector2d &u) {
      const Eigen::VectorXcd uc = u.cast<cplx>();
      return (v - uc.dot(v) * uc).norm() / v.norm();
    };
    const double perp_s = perp(sym);
    const double perp_a = perp(anti);
    if (perp_s < perp_a)
    {
      seen_sym = true;
      worst = std::max(worst, std::asin(std::min(1.0, perp_s)));
    }
    else
    {
      seen_anti = true;
      worst = std::max(worst, std::asin(std::min(1.0, perp_a)));
    }
  }
  c.pass = worst < 1e-6 && positive && seen_sym && seen_anti;
  c.detail = "max angle " + Num(worst, 3) + " rad (limit 1e-6); eigenvalues " +
             Num(es.values(0).real(), 10) + ", " + Num(es.values(1).real(), 10) +
             (positive ? " real positive" : " NOT real positive");
  return c;
}

AcceptanceCheck OrderCheck(Context &ctx)
{
  AcceptanceCheck c{4, "asymptotic order of omega1", false, "", 0.0};
  const CapacitanceSet &set = ctx.Fig1();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ResonanceAsymptotics> modes;
  try
  {
    modes = LinearAsymptotics(set.C, set.Cgen, 1.0);
  }
  catch (const Error &err)
  {
    c.detail = err.what();
    return c;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = true;
  int radiative = 0;
  std::string parts;
  for (const auto &m : modes)
  {
    if (!m.radiative)
    {
      parts += " mode " + std::to_string(m.mode + 1) + " non-radiative (skipped);";
      continue;
    }
    radiative++;
    ok = ok && m.slope_with_omega1 >= 1.9 && m.slope_with_omega1 <= 2.1 &&
         m.slope_without_omega1 >= 1.4 && m.slope_without_omega1 <= 1.6;
    parts += " mode " + std::to_string(m.mode + 1) + " slopes " + Num(m.slope_with_omega1, 4) +
             " / " + Num(m.slope_without_omega1, 4) + ";";
  }
  c.pass = ok && radiative > 0 && secs < 5.0;
  c.detail = "with / without omega1:" + parts + " study time " + Num(secs, 3) + " s";
  return c;
}

AcceptanceCheck ClosedFormCheck(Context &ctx)
{
  AcceptanceCheck c{5, "symmetric-dimer closed forms", false, "", 0.0};
  const NonlinearParams p = LeadingOrder(ctx.Fig1());
  const EigenSystem es = ComputeEigenSystem(p.cgen);
  ContinuationLimits limits;
  limits.amplitude_cap = 2.0;
  const double s0 = 0.01;
  double worst = 0.0;
  double reach = 1e300;
  std::size_t count = 0;
  bool symmetric = true;
  for (int k = 0; k < 2; k++)
  {
    Eigen::VectorXcd v = es.right.col(k);
    v *= s0 / v.norm();
    const cplx lam = es.values(k);
    const BranchPoint seed = NewtonSolve(v, lam, p, Gauge{}, Constraint::Amplitude(s0));
    const Branch b = ContinueBranch(seed, p, {}, limits, 1);
    reach = std::min(reach, b.points.back().amplitude);
    for (const BranchPoint &pt : b.points)
    {
      const double a2 = std::norm(pt.q(0));
      symmetric = symmetric && std::abs(std::abs(pt.q(0)) - std::abs(pt.q(1))) < 1e-9;
      const cplx lhs = pt.omega_sq * (1.0 - p.beta * p.cr * p.cr * a2);
      worst = std::max(worst, std::abs(lhs - lam) / std::abs(lam));
      count++;
    }
  }
  c.pass = worst < 1e-8 && reach >= 2.0 && symmetric;
  c.detail = std::to_string(count) + " traced points up to amplitude " + Num(reach, 4) +
             "; max |omega^2 (1 - beta cr^2 |a|^2) - lambda| / |lambda| = " + Num(worst, 3) +
             " (limit 1e-8)";
  return c;
}

AcceptanceCheck SwapCheck(Context &ctx)
{
  AcceptanceCheck c{6, "swap symmetry of solutions", false, "", 0.0};
  const NonlinearParams p = LeadingOrder(ctx.Fig1());
  const SweepResult &sweep = ctx.Fig1Sweep();
  double worst_res = 0.0, worst_phase = 0.0;
  std::size_t count = 0;
  for (const SweepSeed &s : sweep.Flatten())
  {
    const BranchPoint sw = SwapSolution(s.point, p);
    worst_res = std::max(worst_res, ScaledResidualNorm(sw.q, sw.omega_sq, p));
    const auto r0 = BranchPhaseRatio(s.point);
    const auto r1 = BranchPhaseRatio(sw);
    if (r0 && r1)
    {
      worst_phase = std::max(worst_phase, std::abs(*r1 - std::conj(*r0)));
    }
    count++;
  }
  c.pass = count > 0 && worst_res < 1e-11 && worst_phase < 1e-10;
  c.detail = std::to_string(count) + " solutions; max swapped residual " + Num(worst_res, 3) +
             " (limit 1e-11); max phase-conjugation error " + Num(worst_phase, 3) +
             " (limit 1e-10)";
  return c;
}

AcceptanceCheck ThirdBranchCheck(Context &ctx)
{
  AcceptanceCheck c{7, "third branch existence", false, "", 0.0};
  const NonlinearParams p = LeadingOrder(ctx.Fig1());
  const SweepResult &sweep = ctx.Fig1Sweep();
  const double secs = ctx.sweep_seconds;
  SweepOptions small = FigureSweep();
  small.amplitudes = {0.05};
  const SweepResult at = MultistartSweep(p, small);
  const std::size_t low = at.per_amplitude[0].size();
  const double thr = ThirdBranchThreshold(sweep, FigureSweep().amplitudes);
  const double tol = 2.0 * GridStep() + 1e-12;
  c.pass = low == 2 && std::isfinite(thr) && std::abs(thr - kFrozenThirdBranchThreshold) <= tol &&
           secs < 300.0;
  c.detail = std::to_string(low) + " solutions at amplitude 0.05 (expected 2); >= 3 from " +
             Num(thr, 6) + " (frozen " + Num(kFrozenThirdBranchThreshold, 6) + " +- " +
             Num(tol, 3) + "); sweep " + Num(secs, 3) + " s";
  return c;
}

AcceptanceCheck SplittingCheck()
{
  AcceptanceCheck c{8, "asymmetry splitting", false, "", 0.0};
  bool ok = true;
  std::string detail;
  const double tol = 2.0 * GridStep() + 1e-12;
  for (const auto &[r2, frozen] :
       {std::pair{0.21, kFrozenSplitAmplitudeR210}, std::pair{0.22, kFrozenSplitAmplitudeR220}})
  {
    const CapacitanceSet set = ComputeCapacitance(Dimer(r2), kRefinement);
    const NonlinearParams p = LeadingOrder(set);
    SweepOptions o = FigureSweep();
    o.amplitudes = {kGridMin};
    const SweepResult low = MultistartSweep(p, o);
    bool separated = low.per_amplitude[0].size() == 2;
    for (const SweepSeed &s : low.per_amplitude[0])
    {
      separated = separated && std::abs(std::abs(s.point.q(0)) - std::abs(s.point.q(1))) >
                                   1e-3 * s.point.amplitude;
    }

    const EigenSystem es = ComputeEigenSystem(p.cgen);
    int like = -1;
    for (int k = 0; k < 2; k++)
    {
      if ((es.right(0, k) * std::conj(es.right(1, k))).real() > 0.0)
      {
        like = k;
      }
    }
    double split = kNaN;
    if (like >= 0)
    {
      Eigen::VectorXcd v = es.right.col(like);
      const double ratio = std::max(std::abs(v(0)), std::abs(v(1))) /
                           std::min(std::abs(v(0)), std::abs(v(1)));
      v *= kGridMin / v.norm();
      const BranchPoint seed =
          NewtonSolve(v, es.values(like), p, Gauge{}, Constraint::Amplitude(kGridMin));
      const Branch b = ContinueBranch(seed, p, {}, {}, 1);
      split = SplittingAmplitude(b, ratio);
    }
    const bool here = separated && std::isfinite(split) && std::abs(split - frozen) <= tol;
    ok = ok && here;
    detail += "r2 = " + Num(r2, 3) + ": low-amplitude families " +
              (separated ? "separated" : "NOT separated") + ", splitting at " + Num(split, 6) +
              " (frozen " + Num(frozen, 6) + "); ";
  }
  c.pass = ok;
  c.detail = detail + "tolerance +- " + Num(tol, 3);
  return c;
}

AcceptanceCheck PropertyCheck(Context &ctx)
{
  AcceptanceCheck c{9, "property suite", false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const NonlinearParams p = LeadingOrder(ctx.Fig1());
  NonlinearParams kerr = p;
  kerr.model = NonlinearModel::kKerrPencil;
  kerr.delta = 1e-3;
  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-std::numbers::pi, std::numbers::pi);
  auto rvec = [&](Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index j = 0; j < n; j++)
    {
      const double re = normal(rng);
      const double im = normal(rng);
      v(j) = cplx(re, im);
    }
    return v;
  };
  std::vector<std::string> failures;
  const double cnorm = p.cgen.cwiseAbs().maxCoeff();

  double gauge = 0.0, swap = 0.0, reduce = 0.0;
  NonlinearParams zero = p;
  zero.beta = 0.0;
  for (int t = 0; t < 100; t++)
  {
    const Eigen::VectorXcd q = 0.2 * rvec(2);
    const cplx mu(60.0 + 10.0 * normal(rng), 10.0 * normal(rng));
    const cplx rot = std::polar(1.0, unif(rng));
    const double scale = cnorm * q.cwiseAbs().maxCoeff() * (1.0 + std::abs(p.beta) * q.squaredNorm());
    gauge = std::max(gauge, (Residual(rot * q, mu, p) - rot * Residual(q, mu, p)).cwiseAbs().maxCoeff() / scale);
    const Eigen::Vector2cd pq(q(1), q(0));
    const Eigen::VectorXcd r = Residual(q, mu, p);
    const Eigen::Vector2cd pr(r(1), r(0));
    swap = std::max(swap, (Residual(pq, mu, p) - pr).cwiseAbs().maxCoeff() / scale);
    const Eigen::VectorXcd lin = (p.cgen.cast<cplx>() - mu * Eigen::MatrixXcd::Identity(2, 2)) * q;
    reduce = std::max(reduce, (Residual(q, mu, zero) - lin).cwiseAbs().maxCoeff() / scale);
  }
  if (!(gauge < 1e-13))
  {
    failures.push_back("gauge " + Num(gauge, 3));
  }
  if (!(swap < 1e-13))
  {
    failures.push_back("swap " + Num(swap, 3));
  }
  if (!(reduce < 1e-13))
  {
    failures.push_back("beta=0 " + Num(reduce, 3));
  }

  double jac = 0.0;
  for (int t = 0; t < 100; t++)
  {
    const NonlinearParams &pp = t % 2 == 0 ? p : kerr;
    const Eigen::VectorXcd q = 0.3 * rvec(2);
    const cplx s = pp.model == NonlinearModel::kLeadingOrder
                       ? cplx(60.0 + 10.0 * normal(rng), 10.0 * normal(rng))
                       : cplx(0.25 + 0.02 * normal(rng), 0.02 * normal(rng));
    const Eigen::MatrixXd J = RealifiedJacobian(q, s, pp);
    Eigen::MatrixXd fd(J.rows(), J.cols());
    for (Eigen::Index k = 0; k < J.cols(); k++)
    {
      Eigen::VectorXcd qp = q, qm = q;
      cplx sp = s, sm = s;
      double h;
      if (k < 4)
      {
        h = 1e-6 * std::max(1.0, q.cwiseAbs().maxCoeff());
        const cplx d = k < 2 ? cplx(h, 0.0) : cplx(0.0, h);
        qp(k % 2) += d;
        qm(k % 2) -= d;
      }
      else
      {
        h = 1e-6 * std::abs(s);
        const cplx d = k == 4 ? cplx(h, 0.0) : cplx(0.0, h);
        sp += d;
        sm -= d;
      }
      const Eigen::VectorXcd diff = (Residual(qp, sp, pp) - Residual(qm, sm, pp)) / (2.0 * h);
      fd.col(k).head(2) = diff.real();
      fd.col(k).tail(2) = diff.imag();
    }
    jac = std::max(jac, (J - fd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
  }
  if (!(jac < 1e-6))
  {
    failures.push_back("jacobian " + Num(jac, 3));
  }

  const EigenSystem es = ComputeEigenSystem(p.cgen);
  double idem = 0.0, kerr_gap = 0.0, w_scale = 0.0;
  std::vector<cplx> w_lin, w_kerr;
  for (int k = 0; k < 2; k++)
  {
    const EigenPair pair = SelectPair(es, k);
    for (int t = 0; t < 20; t++)
    {
      const Eigen::VectorXcd x = rvec(2);
      const Eigen::VectorXcd px = Project(pair, x);
      idem = std::max(idem, (Project(pair, px) - px).norm() / std::max(px.norm(), 1e-300));
    }
    w_lin.push_back(Omega1Linear(p.c, p.cgen, 1.0, pair));
    w_kerr.push_back(Omega1Kerr(p.c, p.cgen, 1.0, 1.0, 0.0, pair, 0.1 * pair.q0));
    w_scale = std::max(w_scale, std::abs(w_lin.back()));
  }
  // Relative to the largest correction; the non-radiative mode has omega1 = 0 up to rounding.
  for (std::size_t k = 0; k < w_lin.size(); k++)
  {
    kerr_gap = std::max(kerr_gap, std::abs(w_kerr[k] - w_lin[k]) / w_scale);
  }
  if (!(idem < 1e-12))
  {
    failures.push_back("projection " + Num(idem, 3));
  }
  if (!(kerr_gap < 1e-14))
  {
    failures.push_back("omega1 kerr(beta=0) " + Num(kerr_gap, 3));
  }

  BranchRun a, b;
  for (BranchRun *run : {&a, &b})
  {
    run->params = p;
    run->eigen = es;
    SweepOptions o;
    o.amplitudes = AmplitudeGrid(0.02, 0.3, 15, false);
    o.starts = 16;
    o.seed = 7;
    run->traced = TraceBranches(p, o, {}, {});
  }
  const bool same = SweepTableCsv(a) == SweepTableCsv(b) && BranchTableCsv(a) == BranchTableCsv(b);
  if (!same)
  {
    failures.push_back("seeded sweep CSV differs between runs");
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.pass = failures.empty() && secs < 60.0;
  std::ostringstream d;
  d << "gauge " << Num(gauge, 2) << ", swap " << Num(swap, 2) << ", beta=0 " << Num(reduce, 2)
    << ", jacobian-vs-FD " << Num(jac, 2) << ", projection " << Num(idem, 2)
    << ", omega1 kerr/linear " << Num(kerr_gap, 2) << ", CSV determinism "
    << (same ? "identical" : "DIFFERENT") << "; " << Num(secs, 3) << " s";
  for (const auto &f : failures)
  {
    d << "; FAILED " << f;
  }
  c.detail = d.str();
  return c;
}

}  // namespace

double ThirdBranchThreshold(const SweepResult &sweep, const std::vector<double> &grid)
{
  for (std::size_t a = 0; a < sweep.per_amplitude.size() && a < grid.size(); a++)
  {
    if (sweep.per_amplitude[a].size() >= 3)
    {
      return grid[a];
    }
  }
  return kNaN;
}

double SplittingAmplitude(const Branch &family, double linear_ratio)
{
  const double target = 2.0 * linear_ratio;
  auto ratio = [](const BranchPoint &pt) {
    const double hi = pt.q.cwiseAbs().maxCoeff();
    const double lo = pt.q.cwiseAbs().minCoeff();
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  };
  for (std::size_t k = 0; k + 1 < family.points.size(); k++)
  {
    const double r0 = ratio(family.points[k]);
    const double r1 = ratio(family.points[k + 1]);
    if (r0 < target && r1 >= target)
    {
      const double t = std::isfinite(r1) ? (target - r0) / (r1 - r0) : 0.0;
      return family.points[k].amplitude +
             t * (family.points[k + 1].amplitude - family.points[k].amplitude);
    }
  }
  return kNaN;
}

std::string FormatCheck(const AcceptanceCheck &check)
{
  std::ostringstream s;
  s << (check.pass ? "[PASS] " : "[FAIL] ") << check.id << " " << check.title << ": "
    << check.detail << " (" << Num(check.seconds, 3) << " s)";
  return s.str();
}

std::vector<AcceptanceCheck> RunAcceptance(std::ostream *progress)
{
  Context ctx;
  std::vector<std::function<AcceptanceCheck()>> runs = {
      [] { return SphereCapacitanceCheck(); },
      [&] { return DimerCapacitanceCheck(ctx); },
      [&] { return EigenStructureCheck(ctx); },
      [&] { return OrderCheck(ctx); },
      [&] { return ClosedFormCheck(ctx); },
      [&] { return SwapCheck(ctx); },
      [&] { return ThirdBranchCheck(ctx); },
      [] { return SplittingCheck(); },
      [&] { return PropertyCheck(ctx); },
  };
  const std::vector<std::string> titles = {"sphere capacitance",
                                           "dimer capacitance vs image charges",
                                           "eigenvector alignment",
                                           "asymptotic order of omega1",
                                           "symmetric-dimer closed forms",
                                           "swap symmetry of solutions",
                                           "third branch existence",
                                           "asymmetry splitting",
                                           "property suite"};
  std::vector<AcceptanceCheck> out;
  for (std::size_t k = 0; k < runs.size(); k++)
  {
    const auto t0 = std::chrono::steady_clock::now();
    AcceptanceCheck c;
    try
    {
      c = runs[k]();
    }
    catch (const std::exception &err)
    {
      c.id = static_cast<int>(k) + 1;
      c.title = titles[k];
      c.pass = false;
      c.detail = std::string("error: ") + err.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress)
    {
      *progress << FormatCheck(c) << std::endl;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace capres
