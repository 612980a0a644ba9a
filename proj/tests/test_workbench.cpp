// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include "capres/acceptance.hpp"
#include "capres/config.hpp"
#include "capres/workbench.hpp"

using namespace capres;
namespace fs = std::filesystem;

namespace
{

std::string Slurp(const fs::path &p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig Small(const fs::path &dir)
{
  ExperimentConfig cfg = LoadConfig(std::string(CAPRES_CONFIG_DIR) + "/fig1.cfg");
  cfg.refinement = 2;
  cfg.amplitude_min = 0.02;
  cfg.amplitude_max = 0.4;
  cfg.amplitude_count = 8;
  cfg.amplitude_cap = 0.4;
  cfg.starts = 8;
  cfg.output_dir = dir.string();
  return cfg;
}

}  // namespace

TEST_CASE("capmat, linear and branches write their tables")
{
  const fs::path dir = fs::temp_directory_path() / "capres_workbench_test";
  fs::remove_all(dir);
  const ExperimentConfig cfg = Small(dir);
  const CapmatResult cap = RunCapmat(cfg);
  CHECK(cap.ladder == std::vector<int>{0, 1, 2});
  CHECK(cap.ladder_diffs.size() == 2);
  CHECK(Slurp(dir / "capmat.csv").rfind("section,refinement,i,j,value\n", 0) == 0);

  const LinearResult lin = RunLinear(cfg, &cap.set);
  CHECK(lin.modes.size() == 2);
  CHECK(Slurp(dir / "linear.csv").rfind("mode,lambda_re", 0) == 0);

  const BranchRun run = RunBranches(cfg, &cap.set);
  CHECK(run.traced.branches.size() >= 2);
  const std::string csv = Slurp(dir / "branches.csv");
  CHECK(csv.rfind("branch_id,origin,amplitude,abs_q1,abs_q2,phase_ratio_arg,re_omega0,im_omega0,"
                  "residual_norm\n",
                  0) == 0);
  CHECK(csv.find("linear_eigvec_1") != std::string::npos);
  CHECK(csv.find("linear_eigvec_2") != std::string::npos);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(Slurp(dir / "modes.svg").find("</svg>") != std::string::npos);
  CHECK(Slurp(dir / "frequencies.svg").find("</svg>") != std::string::npos);
  CHECK(BranchTableCsv(run) == csv);
  fs::remove_all(dir);
}

TEST_CASE("branch origin labels")
{
  Branch b;
  b.origin = BranchOrigin::kLinearEigvec;
  b.eigvec_index = 1;
  CHECK(OriginLabel(b) == "linear_eigvec_2");
  b.origin = BranchOrigin::kNonlinearityInduced;
  CHECK(OriginLabel(b) == "nonlinearity_induced");
}

TEST_CASE("missing bundled configuration maps to the configuration exit code")
{
  std::ostringstream log;
  CHECK(ReproduceFigures((fs::temp_directory_path() / "capres_none").string(), log,
                         "/nonexistent") == kExitConfig);
}

TEST_CASE("threshold and splitting helpers")
{
  SweepResult s;
  s.per_amplitude.resize(3);
  s.per_amplitude[1].resize(2);
  s.per_amplitude[2].resize(4);
  CHECK(ThirdBranchThreshold(s, {0.1, 0.2, 0.3}) == 0.3);
  s.per_amplitude[2].resize(1);
  CHECK(std::isnan(ThirdBranchThreshold(s, {0.1, 0.2, 0.3})));

  Branch b;
  for (double a : {0.1, 0.2, 0.3})
  {
    BranchPoint pt;
    pt.amplitude = a;
    pt.q = Eigen::Vector2cd(1.0, 1.0 + 10.0 * (a - 0.1));
    b.points.push_back(pt);
  }
  // Ratios 1, 2, 3: twice 1.25 is crossed halfway between the 2nd and 3rd points.
  CHECK(SplittingAmplitude(b, 1.25) == doctest::Approx(0.25));
  CHECK(std::isnan(SplittingAmplitude(b, 5.0)));
}
