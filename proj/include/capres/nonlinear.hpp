// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_NONLINEAR_HPP
#define CAPRES_NONLINEAR_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "capres/errors.hpp"

namespace capres
{

using cplx = std::complex<double>;

enum class NonlinearModel
{
  // C^gen q - omega^2 (q - beta cr^2 |q|^2 q) = 0, unknown spectral value omega^2.
  kLeadingOrder,
  // (omega^2 - delta C^gen + s omega delta (i / 4 pi c0) C^gen J C) q
  //   + |omega|^2 omega i beta cr^2 |q|^2 q = 0, unknown spectral value omega.
  kKerrPencil,
};

struct NonlinearParams
{
  Eigen::MatrixXd cgen;
  Eigen::MatrixXd c;
  double cr = 1.0;
  cplx beta = 0.0;
  double c0 = 1.0;
  double delta = 0.0;
  NonlinearModel model = NonlinearModel::kLeadingOrder;
  int pencil_sign = 1;

  Eigen::Index Size() const { return cgen.rows(); }
  // Throws DomainError when dimensions or model parameters are inconsistent.
  void Validate() const;
  // Typical magnitude of the spectral unknown; used to balance it against q.
  double SpectralScale() const;
};

// A converged solution. `q` is gauge-canonical: its largest-magnitude entry (lowest
// index among ties) is real and nonnegative.
struct BranchPoint
{
  Eigen::VectorXcd q;
  cplx omega_sq = 0.0;
  cplx omega = 0.0;
  // Infinity norm of the residual divided by the magnitude of the terms it balances.
  double residual_norm = 0.0;
  double amplitude = 0.0;
  double jacobian_condition = 0.0;
  bool near_bifurcation = false;

  // omega^2 for the leading-order model, omega for the Kerr pencil.
  cplx Spectral(NonlinearModel model) const;
};

class NewtonError : public NumericalError
{
public:
  NewtonError(const std::string &what, BranchPoint last)
    : NumericalError(what), last_iterate(std::move(last))
  {
  }
  BranchPoint last_iterate;
};

// Residual of the nonlinear system at (q, spectral) where spectral is omega^2 for the
// leading-order model and omega for the Kerr pencil.
Eigen::VectorXcd Residual(const Eigen::VectorXcd &q, cplx spectral, const NonlinearParams &p);

// Infinity norm of the residual relative to the size of its terms.
double ScaledResidualNorm(const Eigen::VectorXcd &q, cplx spectral, const NonlinearParams &p);

// Column layout of the realified unknowns.
enum class RealUnknown
{
  kReQ,
  kImQ,
  kReSpectral,
  kImSpectral,
};

// Exact partial derivatives of (Re F, Im F) with respect to the real unknowns
// (Re q_1..N, Im q_1..N, Re spectral, Im spectral): a 2N x (2N + 2) matrix. When
// `columns` is nonempty only those columns are returned, in that order.
Eigen::MatrixXd RealifiedJacobian(const Eigen::VectorXcd &q, cplx spectral,
                                  const NonlinearParams &p,
                                  const std::vector<Eigen::Index> &columns = {});

// Column index of a real unknown in the full realified layout.
Eigen::Index UnknownColumn(RealUnknown kind, Eigen::Index component, Eigen::Index n);

struct Gauge
{
  enum class Kind
  {
    // Im q_k = 0 for k the largest-magnitude entry of the initial guess.
    kFixPhase,
    // Im q_k = 0 for the given component.
    kFixComponent,
  };
  Kind kind = Kind::kFixPhase;
  int component = 0;
};

struct Constraint
{
  enum class Kind
  {
    // |q|_2 = value.
    kAmplitude,
    // Re(spectral) = value. The solution set is one-dimensional modulo gauge, so only
    // one real part of the spectral value can be prescribed.
    kSpectralReal,
    // tangent . (z - anchor) = value in scaled continuation coordinates.
    kArclength,
  };
  Kind kind = Kind::kAmplitude;
  double value = 0.0;
  Eigen::VectorXd anchor;
  Eigen::VectorXd tangent;

  static Constraint Amplitude(double s) { return {Kind::kAmplitude, s, {}, {}}; }
  static Constraint SpectralReal(double v) { return {Kind::kSpectralReal, v, {}, {}}; }
};

struct NewtonOptions
{
  double tolerance = 1e-11;
  int max_iterations = 100;
  int max_damping_steps = 40;
  double near_bifurcation_condition = 1e13;
};

// Damped Newton on the 2N residual rows plus one gauge row and one constraint row.
// Throws NewtonError (carrying the last iterate) without convergence or for q = 0.
BranchPoint NewtonSolve(const Eigen::VectorXcd &q0, cplx spectral0, const NonlinearParams &p,
                        const Gauge &gauge, const Constraint &constraint,
                        const NewtonOptions &opts = {});

// Rotate the global phase to the canonical gauge.
Eigen::VectorXcd Canonicalize(const Eigen::VectorXcd &q);

// Distance between two solutions modulo the global phase of q, with the spectral values
// compared in units of the problem's spectral scale.
double GaugeDistance(const BranchPoint &a, const BranchPoint &b, const NonlinearParams &p);

// Real continuation coordinates (Re q, Im q, Re s / scale, Im s / scale) and back.
Eigen::VectorXd ToCoordinates(const BranchPoint &pt, const NonlinearParams &p);

enum class BranchOrigin
{
  kLinearEigvec,
  kNonlinearityInduced,
};

enum class Termination
{
  kAmplitudeCap,
  kPole,
  kStepFailure,
  kLoopClosure,
  kPointLimit,
};

std::string ToString(BranchOrigin origin);
std::string ToString(Termination reason);

struct Branch
{
  std::vector<BranchPoint> points;
  int id = 0;
  BranchOrigin origin = BranchOrigin::kNonlinearityInduced;
  // Index of the linear eigenvector the branch emanates from, or -1.
  int eigvec_index = -1;
  Termination termination = Termination::kStepFailure;
};

struct StepControl
{
  double ds_initial = 0.01;
  double ds_min = 1e-7;
  double ds_max = 0.05;
  int max_points = 4000;
};

struct ContinuationLimits
{
  double amplitude_cap = 3.0;
  double amplitude_floor = 0.0;
  // Stop when some 1 - beta cr^2 |q_j|^2 comes this close to zero (leading order).
  double pole_tolerance = 1e-6;
  double loop_tolerance = 1e-8;
};

// Pseudo-arclength continuation from a converged seed. `direction` = +1 starts towards
// increasing amplitude, -1 towards decreasing amplitude. Throws PreconditionError when the
// seed does not satisfy the residual tolerance.
Branch ContinueBranch(const BranchPoint &seed, const NonlinearParams &p,
                      const StepControl &steps = {}, const ContinuationLimits &limits = {},
                      int direction = 1, const NewtonOptions &newton = {});

struct SweepOptions
{
  std::vector<double> amplitudes;
  int starts = 64;
  std::uint64_t seed = 1;
  double dedup_tolerance = 1e-6;
};

struct SweepSeed
{
  BranchPoint point;
  std::size_t amplitude_index = 0;
  BranchOrigin origin = BranchOrigin::kNonlinearityInduced;
  int eigvec_index = -1;
};

struct SweepResult
{
  // Deduplicated solutions, grouped by amplitude index and sorted canonically.
  std::vector<std::vector<SweepSeed>> per_amplitude;
  std::size_t failed_starts = 0;
  std::size_t converged_starts = 0;

  std::vector<SweepSeed> Flatten() const;
};

// Fixed-amplitude Newton from every scaled linear eigenvector and from `starts` seeded
// random complex vectors per amplitude. Deterministic for a fixed seed.
SweepResult MultistartSweep(const NonlinearParams &p, const SweepOptions &opts,
                            const NewtonOptions &newton = {});

// Linear-grid or log-grid amplitude list.
std::vector<double> AmplitudeGrid(double min, double max, int count, bool logarithmic);

// Entry swap for dimers, re-canonicalized, same spectral value.
BranchPoint SwapSolution(const BranchPoint &pt, const NonlinearParams &p);

// (q1 / q2) / |q1 / q2| for dimers; empty when an entry vanishes.
std::optional<cplx> BranchPhaseRatio(const BranchPoint &pt);

}  // namespace capres

#endif  // CAPRES_NONLINEAR_HPP
