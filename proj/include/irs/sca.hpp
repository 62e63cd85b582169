#pragma once

// Low-complexity alternating optimization: a convex minorize-maximize step
// for the beamformer and a semi-closed-form phase update whose multiplier is
// found by bisection. All vectors are in ScaledProblem units.

#include <random>

#include "irs/problem.hpp"

namespace irs {

/// Linearized beamformer subproblem around w_prev:
///   max  2 Re{w^H Qr w_prev}
///   s.t. kappa (w^H Qe w + 1) <= 2 Re{w^H Qb w_prev} - w_prev^H Qb w_prev + 1,  ||w||^2 <= 1
/// with Qx = Hx^H v v^H Hx. Solved through its two-multiplier Lagrange dual.
/// Throws NumericalFailure when the surrogate has no feasible point.
ComplexVector sca_w_step(const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w_prev);

struct BeamLoop {
  ComplexVector w;
  int steps = 0;
};

/// Repeats sca_w_step from w0 until the relative gain change is below tol or
/// max_steps. Steps that would lower |v^H Hr w|^2 are rejected.
BeamLoop optimize_w_sca(const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w0, int max_steps,
                        double tol);

struct PhaseSubproblemData {
  ComplexVector a, b, c;  // diag(h_ix^H) G w
  cdouble alpha, beta, gamma;
  HermitianMatrix A;      // kappa c c^H - b b^H
  double lambda_max_A = 0;
  ComplexVector d, f;
  double c1 = 0, c2 = 0;
  ComplexVector u_tilde;
  double kappa = 2.0;
};

PhaseSubproblemData build_phase_data(const ScaledProblem& p, const ComplexVector& w, const ComplexVector& u_prev);

/// u_n = exp(j arg(d_n + mu f_n)); zero entries get phase 0.
ComplexVector u_of_mu(const ComplexVector& d, const ComplexVector& f, double mu);

/// g(mu) = 2 Re{u(mu)^H f}
double dual_slope(const ComplexVector& d, const ComplexVector& f, double mu);

struct MuSearch {
  double mu = 0;
  ComplexVector u;
  double residual = 0;  // g(mu) - c2, nonnegative
  int iterations = 0;
};

/// Multiplier for the linearized secrecy constraint 2 Re{u^H f} >= c2 by
/// complementary slackness. Throws PhaseStepInfeasible when 2 sum|f_n| < c2.
MuSearch bisect_mu(const PhaseSubproblemData& data, double eps_bisect);

struct PhaseLoop {
  ComplexVector u;
  int refinements = 0;
  bool infeasible_step = false;
};

/// Up to max_refinements rounds of build_phase_data + bisect_mu. A candidate
/// is accepted only if it keeps the exact secrecy constraint and does not lower
/// the harvested power.
PhaseLoop optimize_u_sca(const ScaledProblem& p, const ComplexVector& w, const ComplexVector& u0,
                         int max_refinements, double tol, double eps_bisect);

/// Initial phases per cfg.solver.phase_init.
ComplexVector initial_phases(Index n, PhaseInit init, std::mt19937_64& rng);

SolveResult sca_ao(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Beamformer-only optimization for fixed phases (baselines).
SolveResult optimize_beamformer(const ChannelSet& ch, const ScenarioConfig& cfg, const ComplexVector& u);

}  // namespace irs
