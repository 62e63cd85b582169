#pragma once

// Semidefinite-relaxation alternating optimization with Gaussian-randomization
// recovery. Matrices are in ScaledProblem units: tr(W) <= 1 and V has a unit
// diagonal; relaxed harvested watts are zeta * sigma^2 * tr(Hr^H V Hr W).

#include <random>

#include "irs/problem.hpp"
#include "irs/sdp.hpp"

namespace irs {

struct SdrStep {
  HermitianMatrix X;
  double value = 0;  // tr(Hr^H V Hr W), normalized
  SdpStatus status = SdpStatus::NumericalFailure;
};

/// max tr(Qr W) s.t. tr(Qb W) + 1 >= kappa (tr(Qe W) + 1), tr(W) <= 1, W PSD,
/// with Qx = Hx^H V Hx.
SdrStep solve_w_sdp(const ScaledProblem& p, const HermitianMatrix& v, const SdpOptions& opt = {});

/// max tr(Rr V) s.t. tr(Rb V) + 1 >= kappa (tr(Re V) + 1), diag(V) = 1, V PSD,
/// with Rx = Hx W Hx^H.
SdrStep solve_v_sdp(const ScaledProblem& p, const HermitianMatrix& w, const SdpOptions& opt = {});

/// Relaxed objective tr(Hr^H V Hr W).
double relaxed_value(const ScaledProblem& p, const HermitianMatrix& w, const HermitianMatrix& v);

/// Best secrecy-feasible full-power candidate psd_sqrt(W) r among `count`
/// draws; falls back to the principal eigenvector. Returns a unit-norm w.
/// Throws RecoveryFailed when nothing is feasible.
ComplexVector randomize_w(const HermitianMatrix& w, const ComplexVector& u, const ScaledProblem& p, int count,
                          std::mt19937_64& rng);

/// Best candidate phases from psd_sqrt(V) r (normalized by the last entry and
/// projected to unit modulus), scored against the fixed W in trace form.
/// Throws RecoveryFailed when nothing is feasible.
ComplexVector randomize_v(const HermitianMatrix& v, const HermitianMatrix& w, const ScaledProblem& p, int count,
                          std::mt19937_64& rng);

struct SdrOutcome {
  SolveResult result;
  HermitianMatrix W, V;             // final relaxation
  std::vector<double> half_steps;   // relaxed objective (watts) after every subproblem
  int restarts = 0;
};

SdrOutcome sdr_ao_detailed(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng);

SolveResult sdr_ao(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng);

}  // namespace irs
