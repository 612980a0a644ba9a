// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_ACCEPTANCE_HPP
#define CAPRES_ACCEPTANCE_HPP

#include <ostream>
#include <string>
#include <vector>
#include "capres/nonlinear.hpp"

namespace capres
{

struct AcceptanceCheck
{
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Regression constants measured with the default sweep (64 starts, 200 amplitudes on
// [0.015, 3], seed 1) and BEM refinement 4.
inline constexpr double kFrozenThirdBranchThreshold = 0.105;
inline constexpr double kFrozenSplitAmplitudeR210 = 0.100858;
inline constexpr double kFrozenSplitAmplitudeR220 = 0.106452;

// Smallest grid amplitude with at least three distinct solutions; NaN when none.
double ThirdBranchThreshold(const SweepResult &sweep, const std::vector<double> &grid);

// First amplitude on a traced family at which max|q_j| / min|q_j| reaches twice the
// linear-limit ratio, linearly interpolated between points; NaN when never reached.
double SplittingAmplitude(const Branch &family, double linear_ratio);

// One line per check: "[PASS] 3 title: detail (0.12 s)".
std::string FormatCheck(const AcceptanceCheck &check);

// Runs acceptance criteria 1-9, printing each line to `progress` as it completes.
std::vector<AcceptanceCheck> RunAcceptance(std::ostream *progress = nullptr);

}  // namespace capres

#endif  // CAPRES_ACCEPTANCE_HPP
