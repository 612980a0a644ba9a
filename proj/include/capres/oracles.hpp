// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_ORACLES_HPP
#define CAPRES_ORACLES_HPP

#include <array>
#include <complex>
#include <vector>
#include <Eigen/Core>

namespace capres::oracle
{

using cplx = std::complex<double>;

// Capacitance 4 pi r of an isolated sphere (potential r/|x| outside).
double SphereCapacitance(double radius);

struct ImageCharge
{
  double charge = 0.0;
  // Signed offset from the sphere's own center along the axis towards the other sphere.
  double offset = 0.0;
};

// Result of the Kelvin image iteration for two spheres.
struct ImageChargeState
{
  Eigen::Matrix2d C;
  // images[k][l]: charges inside sphere l when sphere k is held at unit potential.
  std::array<std::array<std::vector<ImageCharge>, 2>, 2> images;
  int iterations = 0;
  // Magnitude of the last image charge that was added.
  double last_magnitude = 0.0;
};

inline constexpr int kMaxImageIterations = 100000;

// Capacitance coefficients of two spheres from successive Kelvin reflections
// q' = -q r / s, s' = r^2 / s. Throws DomainError for non-separated spheres and
// NumericalError without convergence.
ImageChargeState TwoSphereImages(double r1, double r2, double center_distance, double tol);
Eigen::Matrix2d TwoSphereCapacitance(double r1, double r2, double center_distance, double tol);

// Bispherical-coordinate series for two equal spheres of radius a, cosh(alpha) = d/(2a):
//   C11 = 4 pi a sinh(alpha) sum_{n>=0} 1/sinh((2n+1) alpha)
//   C12 = -4 pi a sinh(alpha) sum_{n>=1} 1/sinh(2n alpha)
// The full sum over n >= 1 of 1/sinh(n alpha) gives C11 - C12.
double EqualSpheresSelfSeries(double a, double center_distance);
double EqualSpheresMutualSeries(double a, double center_distance);
double EqualSpheresFullSeries(double a, double center_distance);

// omega^2 = lambda / (1 - beta cr^2 amp^2) on the symmetric-dimer families.
cplx SymmetricDimerOmegaSq(double lambda, cplx beta, double cr, double amp);

// omega^2 = cgen / (1 - beta cr^2 amp^2) for a single resonator.
cplx MonomerOmegaSq(double cgen, cplx beta, double cr, double amp);

}  // namespace capres::oracle

#endif  // CAPRES_ORACLES_HPP
