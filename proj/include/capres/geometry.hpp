// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_GEOMETRY_HPP
#define CAPRES_GEOMETRY_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>
#include <Eigen/Core>
#include <Eigen/Geometry>

namespace capres
{

using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

inline constexpr int kMaxRefinement = 6;
inline constexpr double kDefaultSeparationThreshold = 0.1;

struct SphereSpec
{
  Vec3 center = Vec3::Zero();
  double radius = 1.0;

  double Volume() const;
};

// A finite collection of spherical resonators B_1..B_N together with the material
// parameters of the surrounding medium and of the resonators.
struct ResonatorSystem
{
  std::vector<SphereSpec> spheres;
  double c0 = 1.0;
  // One wave speed per component. A single entry is broadcast to every sphere.
  std::vector<double> cr = {1.0};
  double delta = 1e-3;
  cplx beta = 0.0;
  double separation_threshold = kDefaultSeparationThreshold;

  std::size_t Size() const { return spheres.size(); }
  double WaveSpeed(std::size_t j) const;
  bool UniformWaveSpeed() const;
  // Exact |B_j| = 4/3 pi r_j^3.
  Eigen::VectorXd Volumes() const;
};

struct Panel
{
  std::array<Vec3, 3> vertices;
  Vec3 centroid;
  double area = 0.0;
  Vec3 normal;
  // Zero-based component index (sphere j is component j + 1 in user-facing output).
  int component = 0;

  double Diameter() const;
};

struct SurfaceMesh
{
  std::vector<Panel> panels;
  int refinement = 0;
  // Number of distinct vertices per component, for diagnostics.
  std::vector<std::size_t> vertex_counts;

  std::size_t Size() const { return panels.size(); }
  int Components() const { return static_cast<int>(vertex_counts.size()); }
  std::vector<std::size_t> PanelsOf(int component) const;
  double ComponentArea(int component) const;
};

struct SeparationReport
{
  double min_gap = 0.0;
  double min_ratio = 0.0;
  // Zero-based indices of the pair attaining min_ratio; -1 for a monomer.
  int pair_i = -1;
  int pair_j = -1;
  bool pass = true;
};

// Icosahedron subdivided `refinement` times with vertices projected onto the sphere.
// Panels are flat triangles with outward normals; 20 * 4^refinement of them.
SurfaceMesh BuildSphereMesh(const SphereSpec &sphere, int refinement);

// Component-major concatenation of per-sphere meshes. Throws GeometryError when two
// spheres touch or overlap.
SurfaceMesh BuildSystemMesh(const ResonatorSystem &system, int refinement);

SeparationReport ValidateSeparation(const ResonatorSystem &system);

// Throws GeometryError for empty systems, nonpositive radii or material parameters,
// and separations below the configured threshold.
void ValidateSystem(const ResonatorSystem &system);

}  // namespace capres

#endif  // CAPRES_GEOMETRY_HPP
