// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include "capres/errors.hpp"

namespace capres::oracle
{

double SphereCapacitance(double radius)
{
  if (!(radius > 0.0))
  {
    throw DomainError("sphere radius must be positive");
  }
  return 4.0 * std::numbers::pi * radius;
}

ImageChargeState TwoSphereImages(double r1, double r2, double d, double tol)
{
  if (!(r1 > 0.0 && r2 > 0.0))
  {
    throw DomainError("sphere radii must be positive");
  }
  if (!(d > r1 + r2))
  {
    throw DomainError("spheres are not separated: center distance " + std::to_string(d) +
                      " <= r1 + r2");
  }
  const std::array<double, 2> r = {r1, r2};

  ImageChargeState state;
  state.C.setZero();
  for (int k = 0; k < 2; k++)
  {
    // Unit potential on sphere k: a point charge r_k at its center (potential q/|x|).
    int host = k;
    ImageCharge current{r[k], 0.0};
    state.images[k][host].push_back(current);
    double total[2] = {0.0, 0.0};
    total[host] += current.charge;
    int it = 0;
    while (std::abs(current.charge) >= tol)
    {
      if (++it > kMaxImageIterations)
      {
        throw NumericalError("image-charge iteration did not converge");
      }
      // Reflect into the other sphere. Distance from the charge to the other center.
      const int other = 1 - host;
      const double s = d - current.offset;
      const double ro = r[other];
      current = ImageCharge{-current.charge * ro / s, ro * ro / s};
      host = other;
      state.images[k][host].push_back(current);
      total[host] += current.charge;
    }
    state.iterations += it;
    state.last_magnitude = std::max(state.last_magnitude, std::abs(current.charge));
    for (int l = 0; l < 2; l++)
    {
      state.C(l, k) = 4.0 * std::numbers::pi * total[l];
    }
  }
  const double asym = std::abs(state.C(0, 1) - state.C(1, 0));
  if (asym > 1e-8 * state.C.cwiseAbs().maxCoeff())
  {
    throw NumericalError("image-charge capacitance is not symmetric");
  }
  return state;
}

Eigen::Matrix2d TwoSphereCapacitance(double r1, double r2, double d, double tol)
{
  return TwoSphereImages(r1, r2, d, tol).C;
}

namespace
{

template <typename Term>
double SumSeries(Term term)
{
  double sum = 0.0;
  for (int n = 1; n < 1000000; n++)
  {
    const double t = term(n);
    sum += t;
    if (std::abs(t) < 1e-18 * std::abs(sum))
    {
      return sum;
    }
  }
  throw NumericalError("bispherical series did not converge");
}

double Alpha(double a, double d)
{
  if (!(a > 0.0) || !(d > 2.0 * a))
  {
    throw DomainError("equal spheres must be separated");
  }
  return std::acosh(d / (2.0 * a));
}

}  // namespace

double EqualSpheresSelfSeries(double a, double d)
{
  const double alpha = Alpha(a, d);
  return 4.0 * std::numbers::pi * a * std::sinh(alpha) *
         SumSeries([&](int n) { return 1.0 / std::sinh((2 * n - 1) * alpha); });
}

double EqualSpheresMutualSeries(double a, double d)
{
  const double alpha = Alpha(a, d);
  return -4.0 * std::numbers::pi * a * std::sinh(alpha) *
         SumSeries([&](int n) { return 1.0 / std::sinh(2 * n * alpha); });
}

double EqualSpheresFullSeries(double a, double d)
{
  const double alpha = Alpha(a, d);
  return 4.0 * std::numbers::pi * a * std::sinh(alpha) *
         SumSeries([&](int n) { return 1.0 / std::sinh(n * alpha); });
}

namespace
{

cplx KerrDenominatorRatio(cplx numerator, cplx beta, double cr, double amp)
{
  const cplx denom = 1.0 - beta * cr * cr * amp * amp;
  if (std::abs(denom) < 1e-14)
  {
    throw DomainError("pole of the nonlinear resonance: amplitude " + std::to_string(amp) +
                      " is critical");
  }
  return numerator / denom;
}

}  // namespace

cplx SymmetricDimerOmegaSq(double lambda, cplx beta, double cr, double amp)
{
  return KerrDenominatorRatio(lambda, beta, cr, amp);
}

cplx MonomerOmegaSq(double cgen, cplx beta, double cr, double amp)
{
  return KerrDenominatorRatio(cgen, beta, cr, amp);
}

}  // namespace capres::oracle
