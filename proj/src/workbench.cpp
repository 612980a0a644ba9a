// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/workbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <json.hpp>
#include "capres/acceptance.hpp"
#include "capres/errors.hpp"
#include "capres/output.hpp"

namespace capres
{

namespace
{

std::string Join(const std::string &dir, const std::string &file)
{
  return (std::filesystem::path(dir) / file).string();
}

double Seconds(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Phase-aligns b to a before interpolation.
Eigen::VectorXcd Align(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
{
  const cplx ov = b.dot(a);
  return std::abs(ov) > 0.0 ? Eigen::VectorXcd(b * (ov / std::abs(ov))) : b;
}

bool Covered(const Branch &b, const BranchPoint &target, const NonlinearParams &p, double tol)
{
  const double s = target.amplitude;
  for (std::size_t i = 0; i + 1 < b.points.size(); i++)
  {
    const BranchPoint &a = b.points[i];
    const BranchPoint &c = b.points[i + 1];
    const double lo = std::min(a.amplitude, c.amplitude), hi = std::max(a.amplitude, c.amplitude);
    if (s < lo - 1e-12 || s > hi + 1e-12)
    {
      continue;
    }
    const double seg = GaugeDistance(a, c, p);
    if (GaugeDistance(a, target, p) > 2.0 * seg + 1e-3)
    {
      continue;
    }
    const double t = hi > lo ? (s - a.amplitude) / (c.amplitude - a.amplitude) : 0.0;
    const Eigen::VectorXcd q = (1.0 - t) * a.q + t * Align(a.q, c.q);
    const cplx sp = (1.0 - t) * a.Spectral(p.model) + t * c.Spectral(p.model);
    try
    {
      const BranchPoint pt = NewtonSolve(q, sp, p, Gauge{}, Constraint::Amplitude(s));
      if (GaugeDistance(pt, target, p) < tol)
      {
        return true;
      }
    }
    catch (const NumericalError &)
    {
    }
  }
  return false;
}

cplx LinearSpectral(const NonlinearParams &p, cplx lambda)
{
  return p.model == NonlinearModel::kLeadingOrder ? lambda : std::sqrt(p.delta * lambda);
}

}  // namespace

CapmatResult RunCapmat(const ExperimentConfig &cfg)
{
  const auto t0 = std::chrono::steady_clock::now();
  CapmatResult res;
  for (int r = std::max(0, cfg.refinement - 2); r <= cfg.refinement; r++)
  {
    res.ladder.push_back(r);
    CapacitanceSet set = ComputeCapacitance(cfg.system, r);
    res.ladder_C.push_back(set.C);
    if (res.ladder_C.size() > 1)
    {
      const auto &prev = res.ladder_C[res.ladder_C.size() - 2];
      res.ladder_diffs.push_back((set.C - prev).cwiseAbs().maxCoeff());
    }
    if (r == cfg.refinement)
    {
      res.set = std::move(set);
    }
  }
  res.seconds = Seconds(t0);

  if (cfg.emit_csv)
  {
    CsvTable t({"section", "refinement", "i", "j", "value"});
    const auto n = res.set.C.rows();
    for (Eigen::Index i = 0; i < n; i++)
    {
      for (Eigen::Index j = 0; j < n; j++)
      {
        t.Row().Add("C").Add(cfg.refinement).Add(static_cast<int>(i + 1)).Add(static_cast<int>(j + 1))
            .Add(res.set.C(i, j));
      }
    }
    for (Eigen::Index i = 0; i < n; i++)
    {
      for (Eigen::Index j = 0; j < n; j++)
      {
        t.Row().Add("Cgen").Add(cfg.refinement).Add(static_cast<int>(i + 1))
            .Add(static_cast<int>(j + 1)).Add(res.set.Cgen(i, j));
      }
    }
    for (Eigen::Index j = 0; j < n; j++)
    {
      t.Row().Add("volume").Add(cfg.refinement).Add(static_cast<int>(j + 1)).Add(0).Add(res.set.volumes(j));
    }
    for (std::size_t k = 0; k < res.ladder.size(); k++)
    {
      for (Eigen::Index i = 0; i < n; i++)
      {
        for (Eigen::Index j = 0; j < n; j++)
        {
          t.Row().Add("ladder_C").Add(res.ladder[k]).Add(static_cast<int>(i + 1))
              .Add(static_cast<int>(j + 1)).Add(res.ladder_C[k](i, j));
        }
      }
      if (k > 0)
      {
        t.Row().Add("ladder_max_diff").Add(res.ladder[k]).Add(0).Add(0).Add(res.ladder_diffs[k - 1]);
      }
    }
    WriteFile(Join(cfg.output_dir, "capmat.csv"), t.Render());
  }
  return res;
}

LinearResult RunLinear(const ExperimentConfig &cfg, const CapacitanceSet *precomputed)
{
  LinearResult res;
  res.set = precomputed ? *precomputed : ComputeCapacitance(cfg.system, cfg.refinement);
  const EigenSystem es = ComputeEigenSystem(res.set.Cgen);
  res.warnings = es.warnings;
  try
  {
    res.signs = ResolveSignConventions(res.set.C, res.set.Cgen, cfg.system.c0);
    res.signs_resolved = true;
  }
  catch (const ConsistencyError &err)
  {
    res.warnings.push_back(std::string("sign resolution: ") + err.what());
  }
  res.modes = LinearAsymptotics(res.set.C, res.set.Cgen, cfg.system.c0);

  if (cfg.emit_csv)
  {
    CsvTable t({"mode", "lambda_re", "lambda_im", "omega0_re", "omega0_im", "omega1_re",
                "omega1_im", "pencil_sign", "omega1_sign", "slope_with_omega1",
                "slope_without_omega1", "radiative", "degenerate", "warning"});
    std::string warn;
    for (const auto &w : res.warnings)
    {
      warn += (warn.empty() ? "" : "; ") + w;
    }
    for (const auto &m : res.modes)
    {
      t.Row()
          .Add(m.mode + 1)
          .Add(m.lambda.real())
          .Add(m.lambda.imag())
          .Add(m.omega0.real())
          .Add(m.omega0.imag())
          .Add(m.omega1.real())
          .Add(m.omega1.imag())
          .Add(m.pencil_sign)
          .Add(m.omega1_sign)
          .Add(m.slope_with_omega1)
          .Add(m.slope_without_omega1)
          .Add(m.radiative ? "true" : "false")
          .Add(m.degenerate ? "true" : "false")
          .Add(warn);
    }
    WriteFile(Join(cfg.output_dir, "linear.csv"), t.Render());
  }
  return res;
}

BranchSet TraceBranches(const NonlinearParams &p, const SweepOptions &sweep,
                        const StepControl &steps, const ContinuationLimits &limits)
{
  BranchSet out;
  out.grid = sweep.amplitudes;
  if (out.grid.empty())
  {
    throw DomainError("amplitude grid is empty");
  }
  out.sweep = MultistartSweep(p, sweep);
  const EigenSystem es = ComputeEigenSystem(p.cgen);
  const double s0 = out.grid.front();

  for (Eigen::Index k = 0; k < es.values.size(); k++)
  {
    Eigen::VectorXcd v = es.right.col(k);
    v *= s0 / v.norm();
    try
    {
      const BranchPoint seed = NewtonSolve(v, LinearSpectral(p, es.values(k)), p, Gauge{},
                                           Constraint::Amplitude(s0));
      Branch b = ContinueBranch(seed, p, steps, limits, 1);
      b.id = static_cast<int>(out.branches.size()) + 1;
      b.origin = BranchOrigin::kLinearEigvec;
      b.eigvec_index = static_cast<int>(k);
      out.branches.push_back(std::move(b));
    }
    catch (const NumericalError &)
    {
      // The sweep below still seeds this family if it exists.
    }
  }

  ContinuationLimits down = limits;
  down.amplitude_floor = 0.5 * s0;
  for (const SweepSeed &cand : out.sweep.Flatten())
  {
    bool covered = false;
    for (const Branch &b : out.branches)
    {
      if (Covered(b, cand.point, p, sweep.dedup_tolerance))
      {
        covered = true;
        break;
      }
    }
    if (covered)
    {
      continue;
    }
    Branch fwd = ContinueBranch(cand.point, p, steps, limits, 1);
    Branch bwd = ContinueBranch(cand.point, p, steps, down, -1);
    Branch b;
    b.points.assign(bwd.points.rbegin(), bwd.points.rend());
    b.points.insert(b.points.end(), fwd.points.begin() + 1, fwd.points.end());
    b.termination = fwd.termination;
    b.id = static_cast<int>(out.branches.size()) + 1;
    b.origin = BranchOrigin::kNonlinearityInduced;
    out.branches.push_back(std::move(b));
  }
  return out;
}

std::string OriginLabel(const Branch &b)
{
  if (b.origin == BranchOrigin::kLinearEigvec)
  {
    return "linear_eigvec_" + std::to_string(b.eigvec_index + 1);
  }
  return ToString(b.origin);
}

NonlinearParams MakeNonlinearParams(const ExperimentConfig &cfg, const CapacitanceSet &set)
{
  if (cfg.model == ExperimentModel::kLinear)
  {
    throw PreconditionError("branch tracing needs model = leading_order or kerr_pencil");
  }
  NonlinearParams p;
  p.cgen = set.Cgen;
  p.c = set.C;
  p.cr = cfg.system.WaveSpeed(0);
  p.beta = cfg.system.beta;
  p.c0 = cfg.system.c0;
  p.delta = cfg.system.delta;
  p.model = cfg.model == ExperimentModel::kKerrPencil ? NonlinearModel::kKerrPencil
                                                      : NonlinearModel::kLeadingOrder;
  p.pencil_sign = cfg.pencil_sign != 0 ? cfg.pencil_sign : 1;
  if (p.model == NonlinearModel::kKerrPencil && cfg.pencil_sign == 0)
  {
    KerrProbe probe;
    probe.beta = p.beta;
    probe.cr = p.cr;
    const SignResolution res = ResolveSignConventions(set.C, set.Cgen, p.c0, probe);
    p.pencil_sign = res.kerr.pencil_sign;
  }
  p.Validate();
  return p;
}

std::string BranchTableCsv(const BranchRun &run)
{
  const Eigen::Index n = run.params.Size();
  std::vector<std::string> header = {"branch_id", "origin", "amplitude"};
  for (Eigen::Index j = 0; j < n; j++)
  {
    header.push_back("abs_q" + std::to_string(j + 1));
  }
  for (const char *h : {"phase_ratio_arg", "re_omega0", "im_omega0", "residual_norm"})
  {
    header.emplace_back(h);
  }
  CsvTable t(header);
  for (const Branch &b : run.traced.branches)
  {
    std::vector<const BranchPoint *> pts;
    for (const auto &pt : b.points)
    {
      pts.push_back(&pt);
    }
    std::stable_sort(pts.begin(), pts.end(), [](const BranchPoint *x, const BranchPoint *y) {
      return x->amplitude < y->amplitude;
    });
    for (const BranchPoint *pt : pts)
    {
      t.Row().Add(b.id).Add(OriginLabel(b)).Add(pt->amplitude);
      for (Eigen::Index j = 0; j < n; j++)
      {
        t.Add(std::abs(pt->q(j)));
      }
      const auto ratio = BranchPhaseRatio(*pt);
      t.Add(ratio ? std::arg(*ratio) : std::nan(""));
      t.Add(pt->omega.real()).Add(pt->omega.imag()).Add(pt->residual_norm);
    }
  }
  return t.Render();
}

std::string SweepTableCsv(const BranchRun &run)
{
  const Eigen::Index n = run.params.Size();
  std::vector<std::string> header = {"amplitude_index", "amplitude", "solution", "origin"};
  for (Eigen::Index j = 0; j < n; j++)
  {
    header.push_back("abs_q" + std::to_string(j + 1));
  }
  for (const char *h : {"phase_ratio_arg", "re_omega0", "im_omega0", "residual_norm"})
  {
    header.emplace_back(h);
  }
  CsvTable t(header);
  for (std::size_t a = 0; a < run.traced.sweep.per_amplitude.size(); a++)
  {
    const auto &level = run.traced.sweep.per_amplitude[a];
    for (std::size_t k = 0; k < level.size(); k++)
    {
      const SweepSeed &s = level[k];
      const std::string origin = s.origin == BranchOrigin::kLinearEigvec
                                     ? "linear_eigvec_" + std::to_string(s.eigvec_index + 1)
                                     : ToString(s.origin);
      t.Row().Add(static_cast<int>(a)).Add(run.traced.grid[a]).Add(static_cast<int>(k + 1)).Add(origin);
      for (Eigen::Index j = 0; j < n; j++)
      {
        t.Add(std::abs(s.point.q(j)));
      }
      const auto ratio = BranchPhaseRatio(s.point);
      t.Add(ratio ? std::arg(*ratio) : std::nan(""));
      t.Add(s.point.omega.real()).Add(s.point.omega.imag()).Add(s.point.residual_norm);
    }
  }
  return t.Render();
}

std::string ModesSvg(const BranchRun &run, const std::string &title)
{
  SvgPlot plot(title, "|q1|", "|q2|");
  plot.Include(0.0, 0.0, 0.0, 0.0);
  double cap = 0.0;
  for (const Branch &b : run.traced.branches)
  {
    std::vector<std::array<double, 2>> pts;
    std::vector<Rgb> colors;
    for (std::size_t k = 0; k < b.points.size(); k++)
    {
      const BranchPoint &pt = b.points[k];
      pts.push_back({std::abs(pt.q(0)), pt.q.size() > 1 ? std::abs(pt.q(1)) : 0.0});
      cap = std::max(cap, pt.amplitude);
      if (k + 1 < b.points.size())
      {
        const auto r0 = BranchPhaseRatio(pt);
        const auto r1 = BranchPhaseRatio(b.points[k + 1]);
        if (r0 && r1)
        {
          colors.push_back(PhaseColor(std::arg(*r0 + *r1)));
        }
        else
        {
          colors.push_back(kNeutralGray);
        }
      }
    }
    plot.ColoredPolyline(pts, colors, 2.2);
  }
  PlotStyle dashed{{0, 0, 0}, 1.2, true};
  for (Eigen::Index k = 0; k < run.eigen.right.cols(); k++)
  {
    const Eigen::VectorXcd v = run.eigen.right.col(k);
    const double a = std::abs(v(0)) / v.norm();
    const double b = v.size() > 1 ? std::abs(v(1)) / v.norm() : 0.0;
    plot.Polyline({{0.0, 0.0}, {cap * a, cap * b}}, dashed);
  }
  plot.Legend("linear families (beta = 0)", dashed);
  plot.PhaseBar();
  return plot.Render();
}

std::string FrequenciesSvg(const BranchRun &run, const std::string &title)
{
  SvgPlot plot(title, "Re omega0", "Im omega0");
  for (const Branch &b : run.traced.branches)
  {
    std::vector<std::array<double, 2>> pts;
    for (const BranchPoint &pt : b.points)
    {
      pts.push_back({pt.omega.real(), pt.omega.imag()});
    }
    const PlotStyle style{CategoryColor(b.id - 1), 2.0, false};
    plot.Polyline(pts, style);
    plot.Legend("branch " + std::to_string(b.id) + " (" + OriginLabel(b) + ")", style);
  }
  for (Eigen::Index k = 0; k < run.eigen.values.size(); k++)
  {
    const cplx lam = run.eigen.values(k);
    const cplx w = run.params.model == NonlinearModel::kLeadingOrder ? std::sqrt(lam)
                                                                     : std::sqrt(run.params.delta * lam);
    plot.Marker(w.real(), w.imag(), {0, 0, 0}, 4.0);
  }
  plot.Legend("linear omega0 (beta = 0)", PlotStyle{{0, 0, 0}, 4.0, false});
  return plot.Render();
}

BranchRun RunBranches(const ExperimentConfig &cfg, const CapacitanceSet *precomputed)
{
  BranchRun run;
  run.set = precomputed ? *precomputed : ComputeCapacitance(cfg.system, cfg.refinement);
  run.params = MakeNonlinearParams(cfg, run.set);
  run.eigen = ComputeEigenSystem(run.set.Cgen);

  SweepOptions sweep;
  sweep.amplitudes =
      AmplitudeGrid(cfg.amplitude_min, cfg.amplitude_max, cfg.amplitude_count, cfg.amplitude_log);
  sweep.starts = cfg.starts;
  sweep.seed = cfg.seed;
  ContinuationLimits limits;
  limits.amplitude_cap = cfg.amplitude_cap;
  run.traced = TraceBranches(run.params, sweep, cfg.steps, limits);
  if (run.traced.sweep.converged_starts == 0)
  {
    throw NumericalError("multistart sweep found no solution; increase 'starts' or widen the "
                         "amplitude grid");
  }

  if (cfg.emit_csv)
  {
    WriteFile(Join(cfg.output_dir, "branches.csv"), BranchTableCsv(run));
    WriteFile(Join(cfg.output_dir, "sweep.csv"), SweepTableCsv(run));
  }
  if (cfg.emit_svg)
  {
    WriteFile(Join(cfg.output_dir, "modes.svg"), ModesSvg(run, cfg.name + ": solution magnitudes"));
    WriteFile(Join(cfg.output_dir, "frequencies.svg"),
              FrequenciesSvg(run, cfg.name + ": resonant frequencies"));
  }
  return run;
}

int ReproduceFigures(const std::string &out_dir, std::ostream &log, const std::string &config_dir)
{
  using nlohmann::json;
  json manifest;
  manifest["experiments"] = json::array();
  const std::vector<std::string> names = {"fig1", "fig2_r210", "fig2_r220"};
  std::vector<ExperimentConfig> configs;
  for (const auto &name : names)
  {
    const std::string path = Join(config_dir, name + ".cfg");
    try
    {
      configs.push_back(LoadConfig(path));
    }
    catch (const Error &err)
    {
      log << "error: " << err.what() << "\n";
      return kExitConfig;
    }
  }

  for (std::size_t k = 0; k < names.size(); k++)
  {
    ExperimentConfig cfg = configs[k];
    cfg.output_dir = Join(out_dir, names[k]);
    cfg.emit_csv = true;
    cfg.emit_svg = true;
    const auto t0 = std::chrono::steady_clock::now();
    json entry;
    entry["name"] = names[k];
    try
    {
      WriteFile(Join(cfg.output_dir, "config.resolved.cfg"), EchoConfig(cfg));
      const CapmatResult cap = RunCapmat(cfg);
      RunLinear(cfg, &cap.set);
      const BranchRun run = RunBranches(cfg, &cap.set);
      entry["branches"] = run.traced.branches.size();
      entry["files"] = {"config.resolved.cfg", "capmat.csv", "linear.csv", "branches.csv",
                        "sweep.csv", "modes.svg", "frequencies.svg"};
    }
    catch (const ConfigError &err)
    {
      log << "error [" << names[k] << "]: " << err.what() << "\n";
      return kExitConfig;
    }
    catch (const Error &err)
    {
      log << "error [" << names[k] << "]: " << err.what() << "\n";
      return kExitNumerical;
    }
    entry["seconds"] = Seconds(t0);
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", Seconds(t0));
    log << names[k] << ": done in " << secs << " s\n";
    manifest["experiments"].push_back(entry);
  }

  const std::vector<AcceptanceCheck> checks = RunAcceptance(&log);
  bool all = true;
  manifest["acceptance"] = json::array();
  for (const auto &c : checks)
  {
    all = all && c.pass;
    manifest["acceptance"].push_back(
        {{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
  }
  manifest["all_passed"] = all;
  WriteFile(Join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  return all ? kExitSuccess : kExitAcceptance;
}

}  // namespace capres
