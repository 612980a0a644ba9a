// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/bem.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include "capres/errors.hpp"

namespace capres
{

namespace
{

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

// Dunavant degree-5 rule: barycentric coordinates and weights (summing to one).
struct QuadPoint
{
  double l0, l1, l2, w;
};

constexpr double kA1 = 0.0597158717897698, kB1 = 0.4701420641051151;
constexpr double kA2 = 0.7974269853530873, kB2 = 0.1012865073234563;
constexpr double kW0 = 0.225, kW1 = 0.1323941527885062, kW2 = 0.1259391805448271;

constexpr std::array<QuadPoint, 7> kRule = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, kW0},
                                             {kA1, kB1, kB1, kW1},
                                             {kB1, kA1, kB1, kW1},
                                             {kB1, kB1, kA1, kW1},
                                             {kA2, kB2, kB2, kW2},
                                             {kB2, kA2, kB2, kW2},
                                             {kB2, kB2, kA2, kW2}}};

// Quadrature nodes of one source panel, optionally on a uniform subdivision.
struct SourceRule
{
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

void AppendRule(const Vec3 &a, const Vec3 &b, const Vec3 &c, int levels, SourceRule &rule)
{
  if (levels > 0)
  {
    const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    AppendRule(a, ab, ca, levels - 1, rule);
    AppendRule(b, bc, ab, levels - 1, rule);
    AppendRule(c, ca, bc, levels - 1, rule);
    AppendRule(ab, bc, ca, levels - 1, rule);
    return;
  }
  const double area = 0.5 * (b - a).cross(c - a).norm();
  for (const auto &q : kRule)
  {
    rule.nodes.push_back(q.l0 * a + q.l1 * b + q.l2 * c);
    rule.weights.push_back(q.w * area);
  }
}

SourceRule MakeRule(const Panel &p, int levels)
{
  SourceRule rule;
  AppendRule(p.vertices[0], p.vertices[1], p.vertices[2], levels, rule);
  return rule;
}

double Apply(const SourceRule &rule, const Vec3 &x)
{
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); k++)
  {
    sum += rule.weights[k] / (x - rule.nodes[k]).norm();
  }
  return sum;
}

}  // namespace

double FlatTrianglePotentialInPlane(const Vec3 &a, const Vec3 &b, const Vec3 &c,
                                    const Vec3 &x)
{
  const std::array<Vec3, 3> v = {a, b, c};
  double sum = 0.0;
  for (int k = 0; k < 3; k++)
  {
    const Vec3 &p1 = v[k];
    const Vec3 &p2 = v[(k + 1) % 3];
    const Vec3 t = (p2 - p1).normalized();
    const double s1 = (p1 - x).dot(t);
    const double s2 = (p2 - x).dot(t);
    const double d = ((p1 - x) - s1 * t).norm();
    if (d > 0.0)
    {
      sum += d * (std::asinh(s2 / d) - std::asinh(s1 / d));
    }
  }
  return sum;
}

double TriangleQuadrature(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &x)
{
  SourceRule rule;
  AppendRule(a, b, c, 0, rule);
  return Apply(rule, x);
}

SingleLayerMatrix AssembleSingleLayer(const SurfaceMesh &mesh, const AssemblyOptions &opts)
{
  const auto n = static_cast<Eigen::Index>(mesh.Size());
  for (Eigen::Index q = 0; q < n; q++)
  {
    if (!(mesh.panels[q].area > 0.0))
    {
      throw AssemblyError("panel " + std::to_string(q) + " has zero area");
    }
  }

  SingleLayerMatrix S;
  S.entries.resize(n, n);
  std::vector<Vec3> centroids(n);
  for (Eigen::Index p = 0; p < n; p++)
  {
    centroids[p] = mesh.panels[p].centroid;
  }

  // Column q holds the potential of panel q's unit density at every collocation point.
  for (Eigen::Index q = 0; q < n; q++)
  {
    const Panel &src = mesh.panels[q];
    const SourceRule far = MakeRule(src, 0);
    const SourceRule near = opts.near_levels > 0 ? MakeRule(src, opts.near_levels) : far;
    const double near_radius = opts.near_factor * src.Diameter();
    double *col = S.entries.col(q).data();
    for (Eigen::Index p = 0; p < n; p++)
    {
      if (p == q)
      {
        col[p] = -kInv4Pi * FlatTrianglePotentialInPlane(src.vertices[0], src.vertices[1],
                                                         src.vertices[2], src.centroid);
        continue;
      }
      const Vec3 &x = centroids[p];
      const bool is_near = (x - src.centroid).norm() < near_radius;
      col[p] = -kInv4Pi * Apply(is_near ? near : far, x);
    }
  }
  return S;
}

DensitySet SolveDensities(const SingleLayerMatrix &S, const SurfaceMesh &mesh)
{
  const auto n = S.entries.rows();
  if (n != static_cast<Eigen::Index>(mesh.Size()) || S.entries.cols() != n)
  {
    throw AssemblyError("single layer matrix does not match the mesh");
  }
  const int ncomp = mesh.Components();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, ncomp);
  for (Eigen::Index p = 0; p < n; p++)
  {
    rhs(p, mesh.panels[p].component) = 1.0;
  }

  DensitySet out;
  {
    Eigen::MatrixXd work = S.entries;
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(work);
    const double rcond = lu.rcond();
    out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(out.condition_estimate <= kMaxConditionEstimate))
    {
      throw NumericalError("single layer matrix is ill-conditioned (condition estimate " +
                           std::to_string(out.condition_estimate) + ")");
    }
    out.psi = lu.solve(rhs);
  }
  out.residual_inf = (S.entries * out.psi - rhs).cwiseAbs().maxCoeff();
  return out;
}

Eigen::MatrixXd CapacitanceMatrix(const DensitySet &densities, const SurfaceMesh &mesh)
{
  const int ncomp = mesh.Components();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(ncomp, ncomp);
  for (std::size_t p = 0; p < mesh.Size(); p++)
  {
    const Panel &panel = mesh.panels[p];
    C.row(panel.component) -= panel.area * densities.psi.row(static_cast<Eigen::Index>(p));
  }
  return C;
}

CapacitanceSet GeneralizedCapacitance(const Eigen::MatrixXd &C, const ResonatorSystem &system)
{
  const auto n = static_cast<Eigen::Index>(system.Size());
  if (C.rows() != n || C.cols() != n)
  {
    throw AssemblyError("capacitance matrix size does not match the resonator count");
  }
  CapacitanceSet set;
  set.C = C;
  set.volumes = system.Volumes();
  set.Vvol = Eigen::MatrixXd::Zero(n, n);
  set.Vmat = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; j++)
  {
    const double c = system.WaveSpeed(static_cast<std::size_t>(j));
    set.Vvol(j, j) = 1.0 / set.volumes(j);
    set.Vmat(j, j) = c * c;
  }
  set.Cgen = set.Vmat * set.Vvol * C;
  return set;
}

CapacitanceSet ComputeCapacitance(const ResonatorSystem &system, int refinement,
                                  const AssemblyOptions &opts)
{
  const SurfaceMesh mesh = BuildSystemMesh(system, refinement);
  DensitySet densities;
  {
    const SingleLayerMatrix S = AssembleSingleLayer(mesh, opts);
    densities = SolveDensities(S, mesh);
  }
  return GeneralizedCapacitance(CapacitanceMatrix(densities, mesh), system);
}

}  // namespace capres
