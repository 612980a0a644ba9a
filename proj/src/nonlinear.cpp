// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include "capres/linear.hpp"

namespace capres
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kTieTolerance = 1e-9;
const cplx kI(0.0, 1.0);

bool IsLeading(const NonlinearParams &p) { return p.model == NonlinearModel::kLeadingOrder; }

cplx Gamma(const NonlinearParams &p) { return p.beta * p.cr * p.cr; }

// C^gen J C, J the all-ones matrix.
Eigen::MatrixXd CouplingK(const NonlinearParams &p)
{
  const Eigen::Index n = p.Size();
  return p.cgen * Eigen::MatrixXd::Ones(n, n) * p.c;
}

Eigen::Index DominantIndex(const Eigen::VectorXcd &q)
{
  double best = -1.0;
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < q.size(); j++)
  {
    const double a = std::abs(q(j));
    if (a > best + kTieTolerance * std::max(best, 0.0))
    {
      best = a;
      idx = j;
    }
  }
  return idx;
}

// Everything the Newton loop needs about the problem: residual, realified Jacobian,
// coupling matrix, and the scaling that balances spectral unknowns against q.
struct Problem
{
  const NonlinearParams &p;
  Eigen::Index n;
  Eigen::MatrixXd K;
  double spectral_scale;
  double row_weight;

  explicit Problem(const NonlinearParams &params)
    : p(params), n(params.Size()), K(CouplingK(params)), spectral_scale(params.SpectralScale())
  {
    const double cnorm = p.cgen.cwiseAbs().rowwise().sum().maxCoeff();
    row_weight = IsLeading(p) ? 1.0 / cnorm : 1.0 / (p.delta * cnorm);
  }

  Eigen::VectorXcd F(const Eigen::VectorXcd &q, cplx s) const
  {
    const Eigen::VectorXcd cubic = q.cwiseAbs2().cast<cplx>().cwiseProduct(q);
    if (IsLeading(p))
    {
      return p.cgen.cast<cplx>() * q - s * (q - Gamma(p) * cubic);
    }
    const cplx a = static_cast<double>(p.pencil_sign) * s * p.delta * kI / (4.0 * kPi * p.c0);
    return s * s * q - p.delta * (p.cgen.cast<cplx>() * q) + a * (K.cast<cplx>() * q) +
           std::norm(s) * s * kI * Gamma(p) * cubic;
  }

  double Scale(const Eigen::VectorXcd &q, cplx s) const
  {
    const double qi = q.cwiseAbs().maxCoeff();
    const double cnorm = p.cgen.cwiseAbs().rowwise().sum().maxCoeff();
    const double g = std::abs(Gamma(p));
    double scale;
    if (IsLeading(p))
    {
      scale = cnorm * qi + std::abs(s) * (qi + g * qi * qi * qi);
    }
    else
    {
      const double knorm = K.cwiseAbs().rowwise().sum().maxCoeff();
      const double w = std::abs(s);
      scale = (w * w + p.delta * cnorm + w * p.delta * knorm / (4.0 * kPi * p.c0)) * qi +
              w * w * w * g * qi * qi * qi;
    }
    return std::max(scale, std::numeric_limits<double>::min());
  }

  // 2n x (2n + 2) Jacobian in the true (unscaled) variables.
  Eigen::MatrixXd J(const Eigen::VectorXcd &q, cplx s) const
  {
    Eigen::MatrixXcd dq(n, 2 * n);
    Eigen::VectorXcd ds_re(n), ds_im(n);
    const cplx g = Gamma(p);
    const Eigen::VectorXcd cubic = q.cwiseAbs2().cast<cplx>().cwiseProduct(q);
    if (IsLeading(p))
    {
      const Eigen::MatrixXcd cg = p.cgen.cast<cplx>();
      dq.leftCols(n) = cg;
      dq.rightCols(n) = kI * cg;
      for (Eigen::Index j = 0; j < n; j++)
      {
        const double x = q(j).real(), y = q(j).imag(), m = std::norm(q(j));
        const cplx gx = 1.0 - g * (2.0 * x * q(j) + m);
        const cplx gy = kI - g * (2.0 * y * q(j) + kI * m);
        dq(j, j) -= s * gx;
        dq(j, n + j) -= s * gy;
      }
      ds_re = -(q - g * cubic);
      ds_im = kI * ds_re;
    }
    else
    {
      const double u = s.real(), v = s.imag(), m2 = std::norm(s);
      const cplx coef = static_cast<double>(p.pencil_sign) * p.delta * kI / (4.0 * kPi * p.c0);
      const Eigen::MatrixXcd A = (s * s) * Eigen::MatrixXcd::Identity(n, n) -
                                 p.delta * p.cgen.cast<cplx>() + (s * coef) * K.cast<cplx>();
      const Eigen::MatrixXcd Ap = (2.0 * s) * Eigen::MatrixXcd::Identity(n, n) +
                                  coef * K.cast<cplx>();
      const cplx h = m2 * s * kI * g;
      dq.leftCols(n) = A;
      dq.rightCols(n) = kI * A;
      for (Eigen::Index j = 0; j < n; j++)
      {
        const double x = q(j).real(), y = q(j).imag(), m = std::norm(q(j));
        dq(j, j) += h * (2.0 * x * q(j) + m);
        dq(j, n + j) += h * (2.0 * y * q(j) + kI * m);
      }
      const cplx hu = (2.0 * u * s + m2) * kI * g;
      const cplx hv = (2.0 * v * s + kI * m2) * kI * g;
      ds_re = Ap * q + hu * cubic;
      ds_im = kI * (Ap * q) + hv * cubic;
    }
    Eigen::MatrixXd out(2 * n, 2 * n + 2);
    out.topLeftCorner(n, 2 * n) = dq.real();
    out.bottomLeftCorner(n, 2 * n) = dq.imag();
    out.block(0, 2 * n, n, 1) = ds_re.real();
    out.block(n, 2 * n, n, 1) = ds_re.imag();
    out.block(0, 2 * n + 1, n, 1) = ds_im.real();
    out.block(n, 2 * n + 1, n, 1) = ds_im.imag();
    return out;
  }

  Eigen::VectorXd Pack(const Eigen::VectorXcd &q, cplx s) const
  {
    Eigen::VectorXd z(2 * n + 2);
    z.head(n) = q.real();
    z.segment(n, n) = q.imag();
    z(2 * n) = s.real() / spectral_scale;
    z(2 * n + 1) = s.imag() / spectral_scale;
    return z;
  }

  void Unpack(const Eigen::VectorXd &z, Eigen::VectorXcd &q, cplx &s) const
  {
    q.resize(n);
    for (Eigen::Index j = 0; j < n; j++)
    {
      q(j) = cplx(z(j), z(n + j));
    }
    s = cplx(z(2 * n), z(2 * n + 1)) * spectral_scale;
  }
};

// Augmented square system: weighted residual rows, gauge row, constraint row.
struct Augmented
{
  const Problem &pr;
  Eigen::Index gauge;
  const Constraint &con;

  Eigen::VectorXd G(const Eigen::VectorXd &z) const
  {
    const Eigen::Index n = pr.n;
    Eigen::VectorXcd q;
    cplx s;
    pr.Unpack(z, q, s);
    const Eigen::VectorXcd f = pr.F(q, s) * pr.row_weight;
    Eigen::VectorXd g(2 * n + 2);
    g.head(n) = f.real();
    g.segment(n, n) = f.imag();
    g(2 * n) = z(n + gauge);
    switch (con.kind)
    {
    case Constraint::Kind::kAmplitude:
      g(2 * n + 1) = q.norm() - con.value;
      break;
    case Constraint::Kind::kSpectralReal:
      g(2 * n + 1) = (s.real() - con.value) / pr.spectral_scale;
      break;
    case Constraint::Kind::kArclength:
      g(2 * n + 1) = con.tangent.dot(z - con.anchor) - con.value;
      break;
    }
    return g;
  }

  Eigen::MatrixXd DG(const Eigen::VectorXd &z) const
  {
    const Eigen::Index n = pr.n;
    Eigen::VectorXcd q;
    cplx s;
    pr.Unpack(z, q, s);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
    Eigen::MatrixXd jac = pr.J(q, s) * pr.row_weight;
    jac.rightCols(2) *= pr.spectral_scale;
    m.topRows(2 * n) = jac;
    m(2 * n, n + gauge) = 1.0;
    switch (con.kind)
    {
    case Constraint::Kind::kAmplitude:
    {
      const double nq = q.norm();
      if (nq > 0.0)
      {
        m.block(2 * n + 1, 0, 1, 2 * n) = z.head(2 * n).transpose() / nq;
      }
      break;
    }
    case Constraint::Kind::kSpectralReal:
      m(2 * n + 1, 2 * n) = 1.0;
      break;
    case Constraint::Kind::kArclength:
      m.row(2 * n + 1) = con.tangent.transpose();
      break;
    }
    return m;
  }
};

struct NewtonOutcome
{
  Eigen::VectorXd z;
  bool converged = false;
  int iterations = 0;
  double condition = 0.0;
};

double Conditioning(const Eigen::MatrixXd &m)
{
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto &sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

bool Converged(const Augmented &aug, const Eigen::VectorXd &z, double tol)
{
  const Eigen::Index n = aug.pr.n;
  Eigen::VectorXcd q;
  cplx s;
  aug.pr.Unpack(z, q, s);
  if (!(q.norm() > 0.0))
  {
    return false;
  }
  const double rel = (aug.pr.F(q, s).cwiseAbs().maxCoeff()) / aug.pr.Scale(q, s);
  const Eigen::VectorXd g = aug.G(z);
  const double qscale = std::max(q.cwiseAbs().maxCoeff(), 1e-300);
  const double side = std::max(std::abs(g(2 * n)), std::abs(g(2 * n + 1)));
  return rel < tol && side < 1e-12 * std::max(1.0, qscale);
}

NewtonOutcome RunNewton(const Augmented &aug, Eigen::VectorXd z, const NewtonOptions &opts,
                        int max_iterations)
{
  NewtonOutcome out;
  Eigen::VectorXd g = aug.G(z);
  double merit = 0.5 * g.squaredNorm();
  for (int it = 0; it < max_iterations; it++)
  {
    if (!z.allFinite())
    {
      break;
    }
    if (Converged(aug, z, opts.tolerance))
    {
      out.converged = true;
      out.iterations = it;
      break;
    }
    const Eigen::MatrixXd dg = aug.DG(z);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dg);
    if (!lu.isInvertible())
    {
      break;
    }
    const Eigen::VectorXd step = lu.solve(-g);
    if (!step.allFinite())
    {
      break;
    }
    // Armijo backtracking on 1/2 |G|^2 with the Newton direction (slope -2 merit).
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    Eigen::VectorXd gt;
    for (int k = 0; k <= opts.max_damping_steps; k++)
    {
      trial = z + t * step;
      gt = aug.G(trial);
      const double mt = 0.5 * gt.squaredNorm();
      if (std::isfinite(mt) && mt <= (1.0 - 1e-4 * t) * merit)
      {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
    {
      // Full steps near convergence can stall at roundoff; take the last check.
      if (Converged(aug, trial, opts.tolerance))
      {
        z = trial;
        out.converged = true;
        out.iterations = it + 1;
      }
      break;
    }
    z = trial;
    g = gt;
    merit = 0.5 * g.squaredNorm();
    out.iterations = it + 1;
  }
  if (!out.converged && z.allFinite() && Converged(aug, z, opts.tolerance))
  {
    out.converged = true;
  }
  out.z = z;
  if (out.converged)
  {
    out.condition = Conditioning(aug.DG(z));
  }
  return out;
}

BranchPoint MakePoint(const Problem &pr, const Eigen::VectorXd &z, double condition,
                      const NewtonOptions &opts)
{
  Eigen::VectorXcd q;
  cplx s;
  pr.Unpack(z, q, s);
  BranchPoint pt;
  pt.q = Canonicalize(q);
  if (IsLeading(pr.p))
  {
    pt.omega_sq = s;
    pt.omega = std::sqrt(s);
  }
  else
  {
    pt.omega = s;
    pt.omega_sq = s * s;
  }
  pt.amplitude = pt.q.norm();
  pt.residual_norm = ScaledResidualNorm(pt.q, pt.Spectral(pr.p.model), pr.p);
  pt.jacobian_condition = condition;
  pt.near_bifurcation = condition > opts.near_bifurcation_condition;
  return pt;
}

}  // namespace

void NonlinearParams::Validate() const
{
  const Eigen::Index n = cgen.rows();
  if (n == 0 || cgen.cols() != n)
  {
    throw DomainError("generalized capacitance matrix must be square and nonempty");
  }
  if (!(cr > 0.0) || !(c0 > 0.0))
  {
    throw DomainError("wave speeds must be positive");
  }
  if (model == NonlinearModel::kKerrPencil)
  {
    if (!(delta > 0.0))
    {
      throw DomainError("the Kerr pencil requires delta > 0");
    }
    if (c.rows() != n || c.cols() != n)
    {
      throw DomainError("capacitance matrix size does not match");
    }
    if (pencil_sign != 1 && pencil_sign != -1)
    {
      throw DomainError("pencil sign must be +1 or -1");
    }
  }
}

double NonlinearParams::SpectralScale() const
{
  const double lam = cgen.cwiseAbs().rowwise().sum().maxCoeff();
  if (model == NonlinearModel::kLeadingOrder)
  {
    return lam;
  }
  return std::sqrt(delta * lam);
}

cplx BranchPoint::Spectral(NonlinearModel model) const
{
  return model == NonlinearModel::kLeadingOrder ? omega_sq : omega;
}

Eigen::VectorXcd Residual(const Eigen::VectorXcd &q, cplx spectral, const NonlinearParams &p)
{
  if (q.size() != p.Size())
  {
    throw DomainError("vector length does not match the system size");
  }
  return Problem(p).F(q, spectral);
}

double ScaledResidualNorm(const Eigen::VectorXcd &q, cplx spectral, const NonlinearParams &p)
{
  const Problem pr(p);
  return pr.F(q, spectral).cwiseAbs().maxCoeff() / pr.Scale(q, spectral);
}

Eigen::Index UnknownColumn(RealUnknown kind, Eigen::Index component, Eigen::Index n)
{
  switch (kind)
  {
  case RealUnknown::kReQ:
    return component;
  case RealUnknown::kImQ:
    return n + component;
  case RealUnknown::kReSpectral:
    return 2 * n;
  case RealUnknown::kImSpectral:
    return 2 * n + 1;
  }
  return 0;
}

Eigen::MatrixXd RealifiedJacobian(const Eigen::VectorXcd &q, cplx spectral,
                                  const NonlinearParams &p,
                                  const std::vector<Eigen::Index> &columns)
{
  if (q.size() != p.Size())
  {
    throw DomainError("vector length does not match the system size");
  }
  const Eigen::MatrixXd full = Problem(p).J(q, spectral);
  if (columns.empty())
  {
    return full;
  }
  Eigen::MatrixXd out(full.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); k++)
  {
    if (columns[k] < 0 || columns[k] >= full.cols())
    {
      throw DomainError("Jacobian column index out of range");
    }
    out.col(static_cast<Eigen::Index>(k)) = full.col(columns[k]);
  }
  return out;
}

Eigen::VectorXcd Canonicalize(const Eigen::VectorXcd &q)
{
  if (q.size() == 0)
  {
    return q;
  }
  const cplx lead = q(DominantIndex(q));
  if (std::abs(lead) == 0.0)
  {
    return q;
  }
  Eigen::VectorXcd out = q * (std::abs(lead) / lead);
  out(DominantIndex(q)) = std::abs(lead);
  return out;
}

double GaugeDistance(const BranchPoint &a, const BranchPoint &b, const NonlinearParams &p)
{
  const double d2 = a.q.squaredNorm() + b.q.squaredNorm() - 2.0 * std::abs(a.q.dot(b.q));
  const double dq = std::sqrt(std::max(d2, 0.0));
  return dq + std::abs(a.Spectral(p.model) - b.Spectral(p.model)) / p.SpectralScale();
}

Eigen::VectorXd ToCoordinates(const BranchPoint &pt, const NonlinearParams &p)
{
  return Problem(p).Pack(pt.q, pt.Spectral(p.model));
}

BranchPoint NewtonSolve(const Eigen::VectorXcd &q0, cplx spectral0, const NonlinearParams &p,
                        const Gauge &gauge, const Constraint &constraint,
                        const NewtonOptions &opts)
{
  p.Validate();
  const Problem pr(p);
  if (q0.size() != pr.n)
  {
    throw DomainError("initial vector length does not match the system size");
  }
  if (!(q0.norm() > 0.0))
  {
    BranchPoint last;
    last.q = q0;
    throw NewtonError("initial vector is zero; the gauge row is singular", last);
  }
  Eigen::Index k = gauge.kind == Gauge::Kind::kFixComponent ? gauge.component : DominantIndex(q0);
  if (k < 0 || k >= pr.n)
  {
    throw DomainError("gauge component out of range");
  }
  // Start in the gauge so that the gauge row holds initially.
  Eigen::VectorXcd qs = q0;
  if (std::abs(q0(k)) > 0.0)
  {
    qs *= std::abs(q0(k)) / q0(k);
  }
  const Augmented aug{pr, k, constraint};
  const NewtonOutcome res = RunNewton(aug, pr.Pack(qs, spectral0), opts, opts.max_iterations);
  if (!res.converged)
  {
    Eigen::VectorXcd q;
    cplx s;
    pr.Unpack(res.z, q, s);
    BranchPoint last;
    last.q = q;
    last.omega_sq = IsLeading(p) ? s : s * s;
    last.omega = IsLeading(p) ? std::sqrt(s) : s;
    last.amplitude = q.norm();
    last.residual_norm = q.allFinite() && q.norm() > 0.0 ? ScaledResidualNorm(q, s, p)
                                                         : std::numeric_limits<double>::infinity();
    throw NewtonError("Newton iteration did not converge", last);
  }
  BranchPoint pt = MakePoint(pr, res.z, res.condition, opts);
  if (!(pt.residual_norm < opts.tolerance))
  {
    throw NewtonError("canonicalized point fails the residual check", pt);
  }
  return pt;
}

std::string ToString(BranchOrigin origin)
{
  return origin == BranchOrigin::kLinearEigvec ? "linear_eigvec" : "nonlinearity_induced";
}

std::string ToString(Termination reason)
{
  switch (reason)
  {
  case Termination::kAmplitudeCap:
    return "amplitude_cap";
  case Termination::kPole:
    return "pole";
  case Termination::kStepFailure:
    return "step_failure";
  case Termination::kLoopClosure:
    return "loop_closure";
  case Termination::kPointLimit:
    return "point_limit";
  }
  return "unknown";
}

namespace
{

// Unit null vector of the gauged residual Jacobian (2n + 1 rows, 2n + 2 columns).
Eigen::VectorXd NullTangent(const Problem &pr, const Eigen::VectorXd &z, Eigen::Index gauge)
{
  const Eigen::Index n = pr.n;
  Constraint dummy;
  dummy.kind = Constraint::Kind::kSpectralReal;
  const Augmented aug{pr, gauge, dummy};
  const Eigen::MatrixXd full = aug.DG(z);
  const Eigen::MatrixXd a = full.topRows(2 * n + 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().col(2 * n + 1).normalized();
}

double PoleDistance(const BranchPoint &pt, const NonlinearParams &p)
{
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < pt.q.size(); j++)
  {
    d = std::min(d, std::abs(1.0 - Gamma(p) * std::norm(pt.q(j))));
  }
  return d;
}

// Re-express z in the canonical gauge of its dominant entry; returns the gauge index and
// rotates the companion vectors by the same phase.
Eigen::Index Regauge(const Problem &pr, Eigen::VectorXd &z, std::vector<Eigen::VectorXd *> others)
{
  const Eigen::Index n = pr.n;
  Eigen::VectorXcd q;
  cplx s;
  pr.Unpack(z, q, s);
  const Eigen::Index k = DominantIndex(q);
  const cplx rot = std::abs(q(k)) > 0.0 ? std::abs(q(k)) / q(k) : cplx(1.0);
  auto rotate = [&](Eigen::VectorXd &v) {
    for (Eigen::Index j = 0; j < n; j++)
    {
      const cplx c = cplx(v(j), v(n + j)) * rot;
      v(j) = c.real();
      v(n + j) = c.imag();
    }
  };
  rotate(z);
  z(n + k) = 0.0;
  for (Eigen::VectorXd *o : others)
  {
    rotate(*o);
  }
  return k;
}

}  // namespace

Branch ContinueBranch(const BranchPoint &seed, const NonlinearParams &p, const StepControl &steps,
                      const ContinuationLimits &limits, int direction, const NewtonOptions &newton)
{
  p.Validate();
  const Problem pr(p);
  if (seed.q.size() != pr.n || !(seed.q.norm() > 0.0) ||
      !(ScaledResidualNorm(seed.q, seed.Spectral(p.model), p) < newton.tolerance))
  {
    throw PreconditionError("continuation seed is not a converged solution");
  }
  const Eigen::Index n = pr.n;
  Branch branch;
  branch.points.push_back(seed);
  branch.termination = Termination::kPointLimit;

  Eigen::VectorXd z = pr.Pack(seed.q, seed.Spectral(p.model));
  Eigen::VectorXd seed_z = z;
  Eigen::Index gauge = Regauge(pr, z, {});
  Eigen::VectorXd tangent = NullTangent(pr, z, gauge);
  // Orient towards the requested amplitude direction: d|q| = q . dq / |q|.
  {
    const double damp = z.head(2 * n).dot(tangent.head(2 * n));
    if ((damp < 0.0) == (direction > 0))
    {
      tangent = -tangent;
    }
  }
  double ds = std::clamp(steps.ds_initial, steps.ds_min, steps.ds_max);
  int easy = 0;
  const bool real_beta = IsLeading(p) && std::abs(p.beta.imag()) <= 1e-14 * std::abs(p.beta) &&
                         p.beta != 0.0;
  const NewtonOptions corr = newton;
  constexpr int kCorrectorIterations = 12;

  while (static_cast<int>(branch.points.size()) < steps.max_points)
  {
    // Closing the loop: aim the step exactly at the seed's arclength plane.
    bool closing = false;
    double step_len = ds;
    if (branch.points.size() > 8)
    {
      Eigen::VectorXd sz = seed_z;
      {
        // Bring the seed into the current gauge.
        Eigen::VectorXcd qs, qc;
        cplx ss, sc;
        pr.Unpack(sz, qs, ss);
        pr.Unpack(z, qc, sc);
        const cplx ov = qs.dot(qc);
        const cplx rot = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
        for (Eigen::Index j = 0; j < n; j++)
        {
          const cplx a = cplx(sz(j), sz(n + j)) * rot;
          sz(j) = a.real();
          sz(n + j) = a.imag();
        }
      }
      const double dist = (sz - z).norm();
      const double along = tangent.dot(sz - z);
      if (dist < 1.5 * ds && along > 0.0)
      {
        closing = true;
        step_len = along;
      }
    }

    Constraint con;
    con.kind = Constraint::Kind::kArclength;
    con.anchor = z;
    con.tangent = tangent;
    con.value = step_len;
    const Augmented aug{pr, gauge, con};
    Eigen::VectorXd pred = z + step_len * tangent;
    NewtonOutcome res = RunNewton(aug, pred, corr, kCorrectorIterations);
    bool ok = res.converged && (res.z - z).norm() < 2.0 * step_len + 1e-12;
    Eigen::VectorXd new_tangent;
    if (ok)
    {
      new_tangent = NullTangent(pr, res.z, gauge);
      const Eigen::VectorXd secant = (res.z - z).normalized();
      if (new_tangent.dot(secant) < 0.0)
      {
        new_tangent = -new_tangent;
      }
      ok = new_tangent.dot(tangent) > 0.5;
    }
    if (!ok)
    {
      easy = 0;
      ds *= 0.5;
      if (ds < steps.ds_min)
      {
        branch.termination = Termination::kStepFailure;
        break;
      }
      continue;
    }

    BranchPoint pt = MakePoint(pr, res.z, res.condition, newton);
    if (!(pt.residual_norm < newton.tolerance))
    {
      ds *= 0.5;
      if (ds < steps.ds_min)
      {
        branch.termination = Termination::kStepFailure;
        break;
      }
      continue;
    }
    z = res.z;
    tangent = new_tangent;
    gauge = Regauge(pr, z, {&tangent});

    if (closing)
    {
      BranchPoint seed_pt = seed;
      if (GaugeDistance(pt, seed_pt, p) < limits.loop_tolerance)
      {
        branch.points.push_back(pt);
        branch.termination = Termination::kLoopClosure;
        break;
      }
    }
    branch.points.push_back(pt);

    if (pt.amplitude > limits.amplitude_cap ||
        (limits.amplitude_floor > 0.0 && pt.amplitude < limits.amplitude_floor))
    {
      branch.termination = Termination::kAmplitudeCap;
      break;
    }
    if (real_beta && PoleDistance(pt, p) < limits.pole_tolerance)
    {
      branch.termination = Termination::kPole;
      break;
    }

    if (res.iterations <= 3)
    {
      if (++easy >= 3)
      {
        ds = std::min(ds * 1.3, steps.ds_max);
        easy = 0;
      }
    }
    else
    {
      easy = 0;
    }
  }
  return branch;
}

std::vector<SweepSeed> SweepResult::Flatten() const
{
  std::vector<SweepSeed> out;
  for (const auto &level : per_amplitude)
  {
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<double> AmplitudeGrid(double min, double max, int count, bool logarithmic)
{
  if (count < 1 || !(min > 0.0) || !(max >= min))
  {
    throw DomainError("amplitude grid needs 0 < min <= max and a positive count");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; k++)
  {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    grid[static_cast<std::size_t>(k)] =
        logarithmic ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  return grid;
}

namespace
{

// Canonical ordering for deterministic output: by |q| entries, then phases, then spectral.
bool CanonicalLess(const BranchPoint &a, const BranchPoint &b, NonlinearModel model)
{
  for (Eigen::Index j = 0; j < a.q.size(); j++)
  {
    const double x = std::abs(a.q(j)), y = std::abs(b.q(j));
    if (std::abs(x - y) > 1e-9)
    {
      return x < y;
    }
  }
  for (Eigen::Index j = 0; j < a.q.size(); j++)
  {
    const double x = std::arg(a.q(j)), y = std::arg(b.q(j));
    if (std::abs(x - y) > 1e-9)
    {
      return x < y;
    }
  }
  const cplx sa = a.Spectral(model), sb = b.Spectral(model);
  if (sa.real() != sb.real())
  {
    return sa.real() < sb.real();
  }
  return sa.imag() < sb.imag();
}

cplx InitialSpectral(const NonlinearParams &p, const Eigen::VectorXcd &q)
{
  const Eigen::VectorXcd cq = p.cgen.cast<cplx>() * q;
  const cplx rayleigh = q.dot(cq) / q.squaredNorm();
  if (IsLeading(p))
  {
    const Eigen::VectorXcd g = q - Gamma(p) * q.cwiseAbs2().cast<cplx>().cwiseProduct(q);
    const cplx den = q.dot(g);
    return std::abs(den) > 0.0 ? q.dot(cq) / den : rayleigh;
  }
  return std::sqrt(p.delta * rayleigh);
}

}  // namespace

SweepResult MultistartSweep(const NonlinearParams &p, const SweepOptions &opts,
                            const NewtonOptions &newton)
{
  p.Validate();
  for (std::size_t k = 0; k < opts.amplitudes.size(); k++)
  {
    if (!(opts.amplitudes[k] > 0.0) || (k > 0 && !(opts.amplitudes[k] > opts.amplitudes[k - 1])))
    {
      throw DomainError("amplitude grid must be positive and strictly ascending");
    }
  }
  const Eigen::Index n = p.Size();
  const EigenSystem es = ComputeEigenSystem(p.cgen);

  SweepResult result;
  result.per_amplitude.resize(opts.amplitudes.size());
  for (std::size_t a = 0; a < opts.amplitudes.size(); a++)
  {
    const double s = opts.amplitudes[a];
    std::vector<SweepSeed> found;
    auto attempt = [&](const Eigen::VectorXcd &start, BranchOrigin origin, int eig) {
      try
      {
        BranchPoint pt = NewtonSolve(start, InitialSpectral(p, start), p, Gauge{},
                                     Constraint::Amplitude(s), newton);
        result.converged_starts++;
        found.push_back({std::move(pt), a, origin, eig});
      }
      catch (const NumericalError &)
      {
        result.failed_starts++;
      }
    };
    for (Eigen::Index k = 0; k < n; k++)
    {
      const Eigen::VectorXcd v = es.right.col(k);
      attempt(s * v / v.norm(), BranchOrigin::kLinearEigvec, static_cast<int>(k));
    }
    for (int t = 0; t < opts.starts; t++)
    {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(t)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXcd v(n);
      for (Eigen::Index j = 0; j < n; j++)
      {
        const double re = normal(rng);
        const double im = normal(rng);
        v(j) = cplx(re, im);
      }
      if (!(v.norm() > 0.0))
      {
        result.failed_starts++;
        continue;
      }
      attempt(s * v / v.norm(), BranchOrigin::kNonlinearityInduced, -1);
    }

    // Keep the first occurrence of each distinct solution; eigenvector starts come first
    // so their labels win over random starts converging to the same point.
    std::vector<SweepSeed> unique;
    for (auto &cand : found)
    {
      bool dup = false;
      for (const auto &u : unique)
      {
        if (GaugeDistance(cand.point, u.point, p) < opts.dedup_tolerance)
        {
          dup = true;
          break;
        }
      }
      if (!dup)
      {
        unique.push_back(std::move(cand));
      }
    }
    std::sort(unique.begin(), unique.end(), [&](const SweepSeed &x, const SweepSeed &y) {
      return CanonicalLess(x.point, y.point, p.model);
    });
    result.per_amplitude[a] = std::move(unique);
  }
  return result;
}

BranchPoint SwapSolution(const BranchPoint &pt, const NonlinearParams &p)
{
  if (pt.q.size() != 2)
  {
    throw DomainError("entry swap is defined for dimers only");
  }
  BranchPoint out = pt;
  out.q = Canonicalize(Eigen::Vector2cd(pt.q(1), pt.q(0)));
  out.residual_norm = ScaledResidualNorm(out.q, out.Spectral(p.model), p);
  return out;
}

std::optional<cplx> BranchPhaseRatio(const BranchPoint &pt)
{
  if (pt.q.size() != 2 || std::abs(pt.q(0)) == 0.0 || std::abs(pt.q(1)) == 0.0)
  {
    return std::nullopt;
  }
  const cplx r = pt.q(0) / pt.q(1);
  return r / std::abs(r);
}

}  // namespace capres
