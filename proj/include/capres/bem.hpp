// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_BEM_HPP
#define CAPRES_BEM_HPP

#include <Eigen/Dense>
#include "capres/geometry.hpp"

namespace capres
{

// Collocation matrix of the zeroth-order single layer potential with kernel
// G(x - y) = -1 / (4 pi |x - y|), piecewise-constant densities, centroid collocation.
struct SingleLayerMatrix
{
  Eigen::MatrixXd entries;
  // Always true: the kernel carries the negative sign. Recorded for dumps.
  bool negative_kernel = true;
};

// Equilibrium densities psi_j with S psi_j = 1 on the panels of component j and 0
// elsewhere. One column per component.
struct DensitySet
{
  Eigen::MatrixXd psi;
  double residual_inf = 0.0;
  double condition_estimate = 0.0;
};

struct CapacitanceSet
{
  Eigen::MatrixXd C;
  Eigen::VectorXd volumes;
  Eigen::MatrixXd Vvol;
  Eigen::MatrixXd Vmat;
  Eigen::MatrixXd Cgen;
};

struct AssemblyOptions
{
  // Source panels closer than near_factor * diameter are integrated on a 4^near_levels
  // subdivision of the triangle. Zero levels reproduces the plain 7-point rule.
  double near_factor = 2.0;
  int near_levels = 0;
};

inline constexpr double kMaxConditionEstimate = 1e12;

// Integral of 1/|x - y| over a flat triangle, evaluated at a point x in its plane and
// strictly inside it (closed form, sum of edge contributions).
double FlatTrianglePotentialInPlane(const Vec3 &a, const Vec3 &b, const Vec3 &c,
                                    const Vec3 &x);

// 7-point degree-5 rule for the integral of 1/|x - y| over the triangle (a, b, c).
double TriangleQuadrature(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &x);

SingleLayerMatrix AssembleSingleLayer(const SurfaceMesh &mesh, const AssemblyOptions &opts = {});

DensitySet SolveDensities(const SingleLayerMatrix &S, const SurfaceMesh &mesh);

// C_{l,j} = -sum_{p in B_l} area_p psi_j(p).
Eigen::MatrixXd CapacitanceMatrix(const DensitySet &densities, const SurfaceMesh &mesh);

CapacitanceSet GeneralizedCapacitance(const Eigen::MatrixXd &C, const ResonatorSystem &system);

// Mesh, assemble, solve, and assemble C^gen in one go.
CapacitanceSet ComputeCapacitance(const ResonatorSystem &system, int refinement,
                                  const AssemblyOptions &opts = {});

}  // namespace capres

#endif  // CAPRES_BEM_HPP
