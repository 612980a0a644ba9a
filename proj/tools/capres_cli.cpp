// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include "capres/errors.hpp"
#include "capres/output.hpp"
#include "capres/workbench.hpp"

namespace
{

struct Overrides
{
  std::string config;
  std::string out;
  std::optional<int> refinement;
  std::optional<std::uint64_t> seed;
};

capres::ExperimentConfig Resolve(const Overrides &o)
{
  capres::ExperimentConfig cfg = capres::LoadConfig(o.config);
  if (!o.out.empty())
  {
    cfg.output_dir = o.out;
  }
  if (o.refinement)
  {
    if (*o.refinement < 0 || *o.refinement > capres::kMaxRefinement)
    {
      throw capres::ConfigError("--refinement must lie in [0, " +
                                std::to_string(capres::kMaxRefinement) + "]");
    }
    cfg.refinement = *o.refinement;
  }
  if (o.seed)
  {
    cfg.seed = *o.seed;
  }
  capres::WriteFile(cfg.output_dir + "/config.resolved.cfg", capres::EchoConfig(cfg));
  return cfg;
}

void AddCommon(CLI::App *sub, Overrides &o)
{
  sub->add_option("--config,-c", o.config, "experiment configuration file")->required();
  sub->add_option("--out,-o", o.out, "output directory (overrides output_dir)");
  sub->add_option("--refinement,-r", o.refinement, "icosphere refinement level");
  sub->add_option("--seed", o.seed, "multistart seed");
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"capres: capacitance and subwavelength resonances of spherical resonators"};
  app.require_subcommand(1);

  Overrides o;
  CLI::App *capmat = app.add_subcommand("capmat", "BEM capacitance matrices and refinement ladder");
  CLI::App *linear = app.add_subcommand("linear", "linear resonances and order study");
  CLI::App *branches = app.add_subcommand("branches", "nonlinear sweep and branch continuation");
  CLI::App *repro = app.add_subcommand("reproduce-figures", "bundled figures and acceptance checks");
  AddCommon(capmat, o);
  AddCommon(linear, o);
  AddCommon(branches, o);
  std::string repro_out = "out";
  std::string config_dir = CAPRES_CONFIG_DIR;
  repro->add_option("--out,-o", repro_out, "output directory");
  repro->add_option("--config-dir", config_dir, "directory holding the bundled configurations");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? capres::kExitSuccess : capres::kExitConfig;
  }

  try
  {
    if (*capmat)
    {
      const auto cfg = Resolve(o);
      const capres::CapmatResult res = capres::RunCapmat(cfg);
      std::cout << "C =\n" << res.set.C << "\nCgen =\n" << res.set.Cgen << "\n";
      for (std::size_t k = 0; k < res.ladder_diffs.size(); k++)
      {
        std::cout << "refinement " << res.ladder[k] << " -> " << res.ladder[k + 1]
                  << ": max |dC| = " << capres::FormatNumber(res.ladder_diffs[k]) << "\n";
      }
      std::cout << "wrote " << cfg.output_dir << "/capmat.csv\n";
    }
    else if (*linear)
    {
      const auto cfg = Resolve(o);
      const capres::LinearResult res = capres::RunLinear(cfg);
      for (const auto &w : res.warnings)
      {
        std::cerr << "warning: " << w << "\n";
      }
      for (const auto &m : res.modes)
      {
        std::cout << "mode " << m.mode + 1 << ": lambda = " << capres::FormatNumber(m.lambda.real())
                  << ", omega1 = " << capres::FormatNumber(m.omega1.real()) << " + "
                  << capres::FormatNumber(m.omega1.imag()) << "i, slope "
                  << capres::FormatNumber(m.slope_with_omega1) << "\n";
      }
      std::cout << "wrote " << cfg.output_dir << "/linear.csv\n";
    }
    else if (*branches)
    {
      const auto cfg = Resolve(o);
      const capres::BranchRun run = capres::RunBranches(cfg);
      std::cout << run.traced.branches.size() << " branches, "
                << run.traced.sweep.converged_starts << " converged starts\n";
      std::cout << "wrote " << cfg.output_dir << "/branches.csv\n";
    }
    else
    {
      return capres::ReproduceFigures(repro_out, std::cout, config_dir);
    }
  }
  catch (const capres::ConfigError &err)
  {
    std::cerr << "error: " << err.what() << "\n";
    return capres::kExitConfig;
  }
  catch (const capres::Error &err)
  {
    std::cerr << "error: " << err.what() << "\n";
    return capres::kExitNumerical;
  }
  return capres::kExitSuccess;
}
