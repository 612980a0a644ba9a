// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include "capres/errors.hpp"

namespace capres
{

using namespace std::complex_literals;

namespace
{

// Index of the largest-magnitude entry, preferring the lowest index among near-ties.
Eigen::Index DominantIndex(const Eigen::VectorXcd &v)
{
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < v.size(); k++)
  {
    if (std::abs(v(k)) >= vmax * (1.0 - 1e-9))
    {
      return k;
    }
  }
  return 0;
}

Eigen::MatrixXd CouplingMatrix(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen)
{
  const auto n = C.rows();
  return cgen * Eigen::MatrixXd::Ones(n, n) * C;
}

// Modes with q0^H Pi[Cgen J C q0] = 0 do not couple through J: omega1 has no coupling term
// and the pencil sign cannot be observed on them.
bool CouplesThroughJ(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, const EigenPair &pair)
{
  const Eigen::MatrixXd K = CouplingMatrix(C, cgen);
  const Eigen::VectorXcd kq = K.cast<cplx>() * pair.q0;
  return std::abs(pair.q0.dot(Project(pair, kq))) > 1e-10 * K.norm() * pair.q0.squaredNorm();
}

double FitSlope(const std::vector<double> &x, const std::vector<double> &y)
{
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); k++)
  {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

EigenSystem ComputeEigenSystem(const Eigen::MatrixXd &cgen)
{
  if (cgen.rows() != cgen.cols() || cgen.rows() == 0)
  {
    throw DomainError("generalized capacitance matrix must be square and nonempty");
  }
  const auto n = cgen.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(cgen, true);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalError("eigendecomposition of the generalized capacitance matrix failed");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a).real() != values(b).real())
    {
      return values(a).real() < values(b).real();
    }
    return values(a).imag() < values(b).imag();
  });

  EigenSystem es;
  es.values.resize(n);
  es.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; k++)
  {
    es.values(k) = values(order[k]);
    Eigen::VectorXcd v = vectors.col(order[k]).normalized();
    const cplx pivot = v(DominantIndex(v));
    v *= std::abs(pivot) / pivot;
    es.right.col(k) = v;
  }
  es.left = es.right.inverse();

  const double scale = cgen.norm();
  es.min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; i++)
  {
    for (Eigen::Index j = i + 1; j < n; j++)
    {
      es.min_gap = std::min(es.min_gap, std::abs(es.values(i) - es.values(j)));
    }
  }
  if (n > 1 && es.min_gap < kDegeneracyGap * scale)
  {
    es.degenerate = true;
    es.warnings.push_back("near-degenerate spectrum: eigenvalue gap " +
                          std::to_string(es.min_gap) + " makes the projection ill-conditioned");
  }
  return es;
}

EigenPair SelectPair(const EigenSystem &es, int mode)
{
  const auto n = es.values.size();
  if (mode < 0 || mode >= n)
  {
    throw DomainError("mode index out of range");
  }
  for (Eigen::Index k = 0; k < n; k++)
  {
    if (k != mode &&
        std::abs(es.values(k) - es.values(mode)) < kDegeneracyGap * es.values.cwiseAbs().maxCoeff())
    {
      throw NumericalError("eigenvalue of mode " + std::to_string(mode) +
                           " is not simple; the projection is undefined");
    }
  }
  return EigenPair{es.values(mode), es.right.col(mode), es.left.row(mode).transpose()};
}

Eigen::VectorXcd Project(const EigenPair &pair, const Eigen::VectorXcd &x)
{
  return (pair.w.transpose() * x)(0) / (pair.w.transpose() * pair.q0)(0) * pair.q0;
}

cplx Omega1Linear(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, double c0,
                  const EigenPair &pair, int sign)
{
  const Eigen::VectorXcd kq = CouplingMatrix(C, cgen).cast<cplx>() * pair.q0;
  const cplx num = pair.q0.dot(Project(pair, kq));
  return static_cast<double>(sign) * (-1i / (8.0 * std::numbers::pi * c0)) * num /
         pair.q0.squaredNorm();
}

cplx Omega1Kerr(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, double c0, double cr,
                cplx beta, const EigenPair &pair, const Eigen::VectorXcd &q, int sign)
{
  const Eigen::VectorXcd kq = CouplingMatrix(C, cgen).cast<cplx>() * q;
  const double omega0_sq_abs = std::abs(pair.lambda);
  const Eigen::VectorXcd cubic = q.cwiseAbs2().cast<cplx>().cwiseProduct(q);
  const Eigen::VectorXcd x =
      static_cast<double>(sign) * (-1i / (4.0 * std::numbers::pi * c0)) * kq -
      omega0_sq_abs * 1i * beta * cr * cr * cubic;
  return q.dot(Project(pair, x)) / (2.0 * q.squaredNorm());
}

double PencilMinSingular(cplx omega, double delta, const Eigen::MatrixXd &C,
                         const Eigen::MatrixXd &cgen, double c0, int sign,
                         const KerrProbe *kerr, const Eigen::VectorXcd *q)
{
  const auto n = cgen.rows();
  Eigen::MatrixXcd M = omega * omega * Eigen::MatrixXcd::Identity(n, n) -
                       delta * cgen.cast<cplx>() +
                       static_cast<double>(sign) * omega * delta *
                           (1i / (4.0 * std::numbers::pi * c0)) *
                           CouplingMatrix(C, cgen).cast<cplx>();
  if (kerr != nullptr && q != nullptr)
  {
    const cplx coeff = std::norm(omega) * omega * 1i * kerr->beta * kerr->cr * kerr->cr;
    M.diagonal() += coeff * q->cwiseAbs2().cast<cplx>();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(n - 1);
}

double PencilOrderSlope(cplx omega0, cplx omega1, const Eigen::MatrixXd &C,
                        const Eigen::MatrixXd &cgen, double c0, int pencil_sign,
                        const KerrProbe *kerr, const Eigen::VectorXcd *q)
{
  std::vector<double> x, y;
  for (double delta : kOrderDeltas)
  {
    const cplx omega = omega0 * std::sqrt(delta) + omega1 * delta;
    x.push_back(std::log(delta));
    y.push_back(std::log(PencilMinSingular(omega, delta, C, cgen, c0, pencil_sign, kerr, q)));
  }
  return FitSlope(x, y);
}

namespace
{

ModelSigns ResolveModel(ResonanceModel model, const Eigen::MatrixXd &C,
                        const Eigen::MatrixXd &cgen, double c0, const EigenSystem &es,
                        const KerrProbe &kerr)
{
  ModelSigns out;
  out.model = model;
  out.printed_pencil_sign = model == ResonanceModel::kLinear ? -1 : 1;
  const auto n = cgen.rows();
  const double cr = kerr.cr;

  for (int pencil_sign : {-1, 1})
  {
    for (int omega1_sign : {-1, 1})
    {
      SignCombination combo;
      combo.pencil_sign = pencil_sign;
      combo.omega1_sign = omega1_sign;
      combo.min_slope = std::numeric_limits<double>::infinity();
      combo.max_slope = -std::numeric_limits<double>::infinity();
      for (int mode = 0; mode < n; mode++)
      {
        const EigenPair pair = SelectPair(es, mode);
        if (!CouplesThroughJ(C, cgen, pair))
        {
          continue;
        }
        const cplx omega0 = std::sqrt(pair.lambda);
        double slope = 0.0;
        if (model == ResonanceModel::kLinear)
        {
          const cplx omega1 = Omega1Linear(C, cgen, c0, pair, omega1_sign);
          slope = PencilOrderSlope(omega0, omega1, C, cgen, c0, pencil_sign);
        }
        else
        {
          const Eigen::VectorXcd q = kerr.amplitude * pair.q0;
          const cplx omega1 = Omega1Kerr(C, cgen, c0, cr, kerr.beta, pair, q, omega1_sign);
          slope = PencilOrderSlope(omega0, omega1, C, cgen, c0, pencil_sign, &kerr, &q);
        }
        combo.min_slope = std::min(combo.min_slope, slope);
        combo.max_slope = std::max(combo.max_slope, slope);
      }
      combo.consistent = combo.min_slope >= kSlopeLow && combo.max_slope <= kSlopeHigh;
      out.combinations.push_back(combo);
    }
  }

  if (!std::isfinite(out.combinations.front().min_slope))
  {
    throw ConsistencyError("no mode couples through the radiative term; signs are unobservable");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto &combo : out.combinations)
  {
    best = std::max(best, combo.min_slope);
  }
  if (!(best > kSlopeFloor))
  {
    throw ConsistencyError("no sign combination reaches second-order pencil decay (best slope " +
                           std::to_string(best) + ")");
  }
  // Prefer the consistent combination that keeps the printed pencil of this model.
  const SignCombination *chosen = nullptr;
  for (const auto &combo : out.combinations)
  {
    if (combo.consistent && combo.pencil_sign == out.printed_pencil_sign)
    {
      chosen = &combo;
      break;
    }
  }
  if (chosen == nullptr)
  {
    for (const auto &combo : out.combinations)
    {
      if (combo.min_slope == best)
      {
        chosen = &combo;
        break;
      }
    }
  }
  out.pencil_sign = chosen->pencil_sign;
  out.omega1_sign = chosen->omega1_sign;
  return out;
}

}  // namespace

SignResolution ResolveSignConventions(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen,
                                      double c0, const KerrProbe &kerr)
{
  const EigenSystem es = ComputeEigenSystem(cgen);
  if (es.degenerate)
  {
    throw ConsistencyError("sign resolution needs a simple spectrum: " + es.warnings.front());
  }
  SignResolution res;
  res.linear = ResolveModel(ResonanceModel::kLinear, C, cgen, c0, es, kerr);
  res.kerr = ResolveModel(ResonanceModel::kKerr, C, cgen, c0, es, kerr);
  return res;
}

std::vector<ResonanceAsymptotics> LinearAsymptotics(const Eigen::MatrixXd &C,
                                                    const Eigen::MatrixXd &cgen, double c0)
{
  const EigenSystem es = ComputeEigenSystem(cgen);
  std::vector<ResonanceAsymptotics> out;
  if (es.degenerate)
  {
    // Leading order is still meaningful; omega1 is not.
    for (Eigen::Index k = 0; k < es.values.size(); k++)
    {
      ResonanceAsymptotics r;
      r.mode = static_cast<int>(k);
      r.lambda = es.values(k);
      r.omega0 = std::sqrt(r.lambda);
      r.omega1 = std::numeric_limits<double>::quiet_NaN();
      r.eigvec = es.right.col(k);
      r.degenerate = true;
      out.push_back(r);
    }
    return out;
  }
  const ModelSigns signs = ResolveSignConventions(C, cgen, c0).linear;
  for (Eigen::Index k = 0; k < es.values.size(); k++)
  {
    const EigenPair pair = SelectPair(es, static_cast<int>(k));
    ResonanceAsymptotics r;
    r.mode = static_cast<int>(k);
    r.lambda = pair.lambda;
    r.omega0 = std::sqrt(pair.lambda);
    r.omega1 = Omega1Linear(C, cgen, c0, pair, signs.omega1_sign);
    r.eigvec = pair.q0;
    r.pencil_sign = signs.pencil_sign;
    r.omega1_sign = signs.omega1_sign;
    r.model = ResonanceModel::kLinear;
    r.radiative = CouplesThroughJ(C, cgen, pair);
    if (r.radiative)
    {
      r.slope_with_omega1 = PencilOrderSlope(r.omega0, r.omega1, C, cgen, c0, r.pencil_sign);
      r.slope_without_omega1 = PencilOrderSlope(r.omega0, 0.0, C, cgen, c0, r.pencil_sign);
    }
    else
    {
      r.slope_with_omega1 = r.slope_without_omega1 = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace capres
