// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include "capres/errors.hpp"

namespace capres
{

double SphereSpec::Volume() const
{
  return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

double ResonatorSystem::WaveSpeed(std::size_t j) const
{
  if (cr.size() == 1)
  {
    return cr.front();
  }
  return cr.at(j);
}

bool ResonatorSystem::UniformWaveSpeed() const
{
  return std::all_of(cr.begin(), cr.end(), [&](double c) { return c == cr.front(); });
}

Eigen::VectorXd ResonatorSystem::Volumes() const
{
  Eigen::VectorXd v(spheres.size());
  for (std::size_t j = 0; j < spheres.size(); j++)
  {
    v(j) = spheres[j].Volume();
  }
  return v;
}

double Panel::Diameter() const
{
  return std::max({(vertices[0] - vertices[1]).norm(), (vertices[1] - vertices[2]).norm(),
                   (vertices[2] - vertices[0]).norm()});
}

std::vector<std::size_t> SurfaceMesh::PanelsOf(int component) const
{
  std::vector<std::size_t> idx;
  for (std::size_t p = 0; p < panels.size(); p++)
  {
    if (panels[p].component == component)
    {
      idx.push_back(p);
    }
  }
  return idx;
}

double SurfaceMesh::ComponentArea(int component) const
{
  double a = 0.0;
  for (const auto &p : panels)
  {
    if (p.component == component)
    {
      a += p.area;
    }
  }
  return a;
}

namespace
{

struct UnitIcosphere
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

UnitIcosphere Icosahedron()
{
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  UnitIcosphere ico;
  ico.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto &v : ico.vertices)
  {
    v.normalize();
  }
  ico.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return ico;
}

void Subdivide(UnitIcosphere &ico)
{
  std::map<std::pair<int, int>, int> midpoints;
  auto midpoint = [&](int a, int b)
  {
    const auto key = std::minmax(a, b);
    if (auto it = midpoints.find(key); it != midpoints.end())
    {
      return it->second;
    }
    ico.vertices.push_back((ico.vertices[a] + ico.vertices[b]).normalized());
    const int idx = static_cast<int>(ico.vertices.size()) - 1;
    midpoints.emplace(key, idx);
    return idx;
  };

  std::vector<std::array<int, 3>> faces;
  faces.reserve(4 * ico.faces.size());
  for (const auto &[a, b, c] : ico.faces)
  {
    const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    faces.push_back({a, ab, ca});
    faces.push_back({b, bc, ab});
    faces.push_back({c, ca, bc});
    faces.push_back({ab, bc, ca});
  }
  ico.faces = std::move(faces);
}

}  // namespace

SurfaceMesh BuildSphereMesh(const SphereSpec &sphere, int refinement)
{
  if (refinement < 0)
  {
    throw GeometryError("mesh refinement must be nonnegative");
  }
  if (refinement > kMaxRefinement)
  {
    throw ResourceLimitError("mesh refinement " + std::to_string(refinement) +
                             " exceeds the maximum of " + std::to_string(kMaxRefinement));
  }
  if (!(sphere.radius > 0.0))
  {
    throw GeometryError("sphere radius must be positive");
  }

  UnitIcosphere ico = Icosahedron();
  for (int level = 0; level < refinement; level++)
  {
    Subdivide(ico);
  }

  SurfaceMesh mesh;
  mesh.refinement = refinement;
  mesh.vertex_counts = {ico.vertices.size()};
  mesh.panels.reserve(ico.faces.size());
  for (const auto &face : ico.faces)
  {
    Panel p;
    for (int k = 0; k < 3; k++)
    {
      p.vertices[k] = sphere.center + sphere.radius * ico.vertices[face[k]];
    }
    const Vec3 cross = (p.vertices[1] - p.vertices[0]).cross(p.vertices[2] - p.vertices[0]);
    p.centroid = (p.vertices[0] + p.vertices[1] + p.vertices[2]) / 3.0;
    p.area = 0.5 * cross.norm();
    p.normal = cross.normalized();
    if (p.normal.dot(p.centroid - sphere.center) < 0.0)
    {
      std::swap(p.vertices[1], p.vertices[2]);
      p.normal = -p.normal;
    }
    p.component = 0;
    mesh.panels.push_back(p);
  }
  return mesh;
}

SeparationReport ValidateSeparation(const ResonatorSystem &system)
{
  SeparationReport report;
  const auto &s = system.spheres;
  bool first = true;
  for (std::size_t i = 0; i < s.size(); i++)
  {
    for (std::size_t j = i + 1; j < s.size(); j++)
    {
      const double gap = (s[i].center - s[j].center).norm() - s[i].radius - s[j].radius;
      const double ratio = gap / std::min(s[i].radius, s[j].radius);
      if (first || gap < report.min_gap)
      {
        report.min_gap = gap;
      }
      if (first || ratio < report.min_ratio)
      {
        report.min_ratio = ratio;
        report.pair_i = static_cast<int>(i);
        report.pair_j = static_cast<int>(j);
      }
      first = false;
    }
  }
  report.pass = first || (report.min_gap > 0.0 && report.min_ratio >= system.separation_threshold);
  return report;
}

void ValidateSystem(const ResonatorSystem &system)
{
  if (system.spheres.empty())
  {
    throw GeometryError("resonator system has no spheres");
  }
  for (std::size_t j = 0; j < system.spheres.size(); j++)
  {
    if (!(system.spheres[j].radius > 0.0))
    {
      throw GeometryError("sphere " + std::to_string(j + 1) + " has nonpositive radius");
    }
  }
  if (system.cr.size() != 1 && system.cr.size() != system.spheres.size())
  {
    throw GeometryError("cr must be shared or given once per sphere");
  }
  for (double c : system.cr)
  {
    if (!(c > 0.0))
    {
      throw GeometryError("cr must be positive");
    }
  }
  if (!(system.c0 > 0.0))
  {
    throw GeometryError("c0 must be positive");
  }
  const SeparationReport rep = ValidateSeparation(system);
  if (!rep.pass)
  {
    throw GeometryError("spheres " + std::to_string(rep.pair_i + 1) + " and " +
                        std::to_string(rep.pair_j + 1) +
                        " are not well separated (gap/radius = " +
                        std::to_string(rep.min_ratio) + ")");
  }
}

SurfaceMesh BuildSystemMesh(const ResonatorSystem &system, int refinement)
{
  const auto &s = system.spheres;
  if (s.empty())
  {
    throw GeometryError("resonator system has no spheres");
  }
  for (std::size_t i = 0; i < s.size(); i++)
  {
    for (std::size_t j = i + 1; j < s.size(); j++)
    {
      const double gap = (s[i].center - s[j].center).norm() - s[i].radius - s[j].radius;
      if (!(gap > 0.0))
      {
        throw GeometryError("spheres " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " touch or overlap");
      }
    }
  }

  SurfaceMesh mesh;
  mesh.refinement = refinement;
  for (std::size_t j = 0; j < s.size(); j++)
  {
    SurfaceMesh part = BuildSphereMesh(s[j], refinement);
    for (auto &p : part.panels)
    {
      p.component = static_cast<int>(j);
      mesh.panels.push_back(p);
    }
    mesh.vertex_counts.push_back(part.vertex_counts.front());
  }
  return mesh;
}

}  // namespace capres
