// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_WORKBENCH_HPP
#define CAPRES_WORKBENCH_HPP

#include <ostream>
#include <string>
#include <vector>
#include "capres/bem.hpp"
#include "capres/config.hpp"
#include "capres/linear.hpp"
#include "capres/nonlinear.hpp"

namespace capres
{

struct CapmatResult
{
  CapacitanceSet set;
  std::vector<int> ladder;
  std::vector<Eigen::MatrixXd> ladder_C;
  // Max-entry change of C between consecutive ladder levels.
  std::vector<double> ladder_diffs;
  double seconds = 0.0;
};

// BEM capacitance at the configured refinement and the two levels below it. Writes
// capmat.csv when CSV output is enabled.
CapmatResult RunCapmat(const ExperimentConfig &cfg);

struct LinearResult
{
  CapacitanceSet set;
  SignResolution signs;
  bool signs_resolved = false;
  std::vector<ResonanceAsymptotics> modes;
  std::vector<std::string> warnings;
};

// Writes linear.csv. A precomputed capacitance set skips the BEM solve.
LinearResult RunLinear(const ExperimentConfig &cfg, const CapacitanceSet *precomputed = nullptr);

struct BranchSet
{
  std::vector<Branch> branches;
  SweepResult sweep;
  std::vector<double> grid;
};

// Multistart sweep, then continuation from every linear family and from every sweep
// solution not already lying on a traced branch.
BranchSet TraceBranches(const NonlinearParams &p, const SweepOptions &sweep,
                        const StepControl &steps, const ContinuationLimits &limits);

struct BranchRun
{
  CapacitanceSet set;
  NonlinearParams params;
  EigenSystem eigen;
  BranchSet traced;
};

std::string OriginLabel(const Branch &b);

// ResultTable of the traced branches: rows sorted by (branch id, amplitude).
std::string BranchTableCsv(const BranchRun &run);
std::string SweepTableCsv(const BranchRun &run);
std::string ModesSvg(const BranchRun &run, const std::string &title);
std::string FrequenciesSvg(const BranchRun &run, const std::string &title);

// Nonlinear parameters of a configuration for a given capacitance set; resolves the
// Kerr pencil sign when the configuration leaves it on auto.
NonlinearParams MakeNonlinearParams(const ExperimentConfig &cfg, const CapacitanceSet &set);

// Writes branches.csv, sweep.csv and, with SVG output, modes.svg and frequencies.svg.
// Throws NumericalError when the sweep finds no solution at all.
BranchRun RunBranches(const ExperimentConfig &cfg, const CapacitanceSet *precomputed = nullptr);

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitAcceptance = 3;

// Runs the bundled figure configurations into out_dir/<name>/, then the acceptance
// checks, and writes out_dir/manifest.json. Returns one of the exit codes above.
int ReproduceFigures(const std::string &out_dir, std::ostream &log,
                     const std::string &config_dir = CAPRES_CONFIG_DIR);

}  // namespace capres

#endif  // CAPRES_WORKBENCH_HPP
