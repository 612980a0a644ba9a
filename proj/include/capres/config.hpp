// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_CONFIG_HPP
#define CAPRES_CONFIG_HPP

#include <cstdint>
#include <string>
#include "capres/geometry.hpp"
#include "capres/nonlinear.hpp"

namespace capres
{

enum class ExperimentModel
{
  kLinear,
  kLeadingOrder,
  kKerrPencil,
};

std::string ToString(ExperimentModel model);

struct ExperimentConfig
{
  std::string name = "experiment";
  ResonatorSystem system;
  int refinement = 4;
  ExperimentModel model = ExperimentModel::kLeadingOrder;
  // beta as written in the file; system.beta holds the resolved value.
  cplx beta_input = 0.0;
  // One-based sphere index k whose volume rescales beta by |B_k|^-2, or 0 for none.
  int beta_reference_sphere = 0;
  // 0 resolves the Kerr pencil sign with the order study.
  int pencil_sign = 0;

  double amplitude_min = 0.015;
  double amplitude_max = 3.0;
  int amplitude_count = 200;
  bool amplitude_log = false;
  int starts = 64;
  std::uint64_t seed = 1;

  StepControl steps;
  double amplitude_cap = 3.0;

  std::string output_dir = "out";
  bool emit_csv = true;
  bool emit_svg = true;
};

// Parses the key = value format with [sphere] sections. Throws ConfigError with
// `source:line:column` context for syntax errors, unknown keys and invalid values.
ExperimentConfig ParseConfig(const std::string &text, const std::string &source = "<config>");

ExperimentConfig LoadConfig(const std::string &path);

// Fully resolved configuration in the same format, parseable by ParseConfig.
std::string EchoConfig(const ExperimentConfig &config);

}  // namespace capres

#endif  // CAPRES_CONFIG_HPP
