// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_LINEAR_HPP
#define CAPRES_LINEAR_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>
#include <Eigen/Dense>

namespace capres
{

using cplx = std::complex<double>;

enum class ResonanceModel
{
  kLinear,
  kKerr,
};

inline constexpr double kDegeneracyGap = 1e-8;

// Right and left eigenvectors of C^gen. Eigenvalues are sorted ascending by real part;
// each right eigenvector has unit 2-norm and its largest-magnitude entry real positive;
// left eigenvectors are the rows of the inverse eigenvector matrix.
struct EigenSystem
{
  Eigen::VectorXcd values;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  double min_gap = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

// One eigenpair together with the left eigenvector defining the projection
// Pi[x] = (w . x / w . q0) q0 along the remaining eigenvectors.
struct EigenPair
{
  cplx lambda;
  Eigen::VectorXcd q0;
  Eigen::VectorXcd w;
};

EigenSystem ComputeEigenSystem(const Eigen::MatrixXd &cgen);

// Throws NumericalError when the eigenvalue is not simple.
EigenPair SelectPair(const EigenSystem &es, int mode);

Eigen::VectorXcd Project(const EigenPair &pair, const Eigen::VectorXcd &x);

// First-order correction of the linear resonance,
//   omega1 = sign * (-i / (8 pi c0)) (q0^H Pi[Cgen J C q0]) / |q0|^2,
// where sign = +1 reproduces the printed statement formula.
cplx Omega1Linear(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, double c0,
                  const EigenPair &pair, int sign = 1);

// Kerr counterpart with the amplitude-carrying eigenvector q (parallel to pair.q0):
//   omega1 = q^H Pi[sign (-i / (4 pi c0)) Cgen J C q - |omega0|^2 i beta cr^2 |q|^2 q]
//            / (2 |q|^2).
cplx Omega1Kerr(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen, double c0, double cr,
                cplx beta, const EigenPair &pair, const Eigen::VectorXcd &q, int sign = 1);

// Optional diagonal Kerr term |omega|^2 omega i beta cr^2 diag(|q|^2) added to the pencil.
struct KerrProbe
{
  cplx beta = 0.0;
  double cr = 1.0;
  double amplitude = 0.1;
};

// sigma_min of omega^2 I - delta Cgen + sign omega delta (i / 4 pi c0) Cgen J C
// (+ Kerr diagonal evaluated at q when `kerr` is given).
double PencilMinSingular(cplx omega, double delta, const Eigen::MatrixXd &C,
                         const Eigen::MatrixXd &cgen, double c0, int sign,
                         const KerrProbe *kerr = nullptr, const Eigen::VectorXcd *q = nullptr);

inline const std::array<double, 4> kOrderDeltas = {1e-2, 1e-3, 1e-4, 1e-5};

// Least-squares slope of log sigma_min against log delta for omega(delta) =
// omega0 sqrt(delta) + omega1 delta.
double PencilOrderSlope(cplx omega0, cplx omega1, const Eigen::MatrixXd &C,
                        const Eigen::MatrixXd &cgen, double c0, int pencil_sign,
                        const KerrProbe *kerr = nullptr, const Eigen::VectorXcd *q = nullptr);

struct SignCombination
{
  int pencil_sign = 0;
  int omega1_sign = 0;
  // Minimum over modes of the measured slope with omega1 included.
  double min_slope = 0.0;
  double max_slope = 0.0;
  bool consistent = false;
};

struct ModelSigns
{
  ResonanceModel model = ResonanceModel::kLinear;
  // The pencil sign printed for this model: -1 for the linear pencil, +1 for the Kerr one.
  int printed_pencil_sign = 0;
  int pencil_sign = 0;
  int omega1_sign = 0;
  std::vector<SignCombination> combinations;
};

struct SignResolution
{
  ModelSigns linear;
  ModelSigns kerr;
};

inline constexpr double kSlopeLow = 1.9;
inline constexpr double kSlopeHigh = 2.1;
inline constexpr double kSlopeFloor = 1.8;

// Runs the order study over all pencil / omega1 sign combinations, for every mode that
// couples through the J term (the others are exactly annihilated and carry no sign).
// Throws ConsistencyError when no combination reaches a slope above kSlopeFloor, or when
// the spectrum is degenerate.
SignResolution ResolveSignConventions(const Eigen::MatrixXd &C, const Eigen::MatrixXd &cgen,
                                      double c0, const KerrProbe &kerr = {});

struct ResonanceAsymptotics
{
  int mode = 0;
  cplx lambda;
  cplx omega0;
  cplx omega1;
  Eigen::VectorXcd eigvec;
  int pencil_sign = 0;
  int omega1_sign = 0;
  ResonanceModel model = ResonanceModel::kLinear;
  double slope_with_omega1 = 0.0;
  double slope_without_omega1 = 0.0;
  bool degenerate = false;
  // False when Cgen J C annihilates the mode (omega1 = 0, slopes undefined and NaN).
  bool radiative = true;
};

// omega0 = sqrt(lambda) (principal branch) and the resolved omega1 for every mode.
std::vector<ResonanceAsymptotics> LinearAsymptotics(const Eigen::MatrixXd &C,
                                                    const Eigen::MatrixXd &cgen, double c0);

}  // namespace capres

#endif  // CAPRES_LINEAR_HPP
