#pragma once

// Exhaustive references for small instances (N <= 3, M <= 3).

#include "irs/problem.hpp"

namespace irs {

struct GridSpec {
  int phase_levels = 16;  // theta_n in {2 pi k / phase_levels}
  /// Angle levels per coordinate of the beamformer direction grid. A span of
  /// complex dimension k is parameterized by 2k - 2 angles, so the grid holds
  /// subspace_points^(2k-2) directions. 0 selects the exact inner solve.
  int subspace_points = 0;
  int power_levels = 1;   // powers Ps * l / power_levels, l = 1..power_levels
};

inline constexpr double kMaxGridEvaluations = 1e8;

struct OracleResult {
  ComplexVector w;  // physical units
  ComplexVector u;
  double value = 0;  // harvested watts
  double evaluations = 0;
};

/// Best secrecy-feasible harvested power for fixed phases over ||w||^2 <= 1
/// (normalized units), via the S-lemma dual
///   min_{lambda >= 0} lambda_max(hr hr^H + lambda (hb hb^H - kappa he he^H - (kappa - 1) I)).
/// Returns a feasible unit-or-less w attaining it; throws Infeasible if none.
struct InnerSolution {
  ComplexVector w;
  double gain = 0;  // |hr^H w|^2
};
InnerSolution exact_inner_solve(const ComplexVector& hr, const ComplexVector& hb, const ComplexVector& he,
                                double kappa);

/// Grid over phases and beamformers. Throws GridTooLarge above
/// kMaxGridEvaluations, Infeasible when no grid point meets the secrecy target.
OracleResult grid_search_joint(const ChannelSet& ch, const ScenarioConfig& cfg, const GridSpec& grid);

/// Phase grid for a fixed physical beamformer w. Throws GridTooLarge or Infeasible.
OracleResult grid_search_phases(const ChannelSet& ch, const ComplexVector& w, const ScenarioConfig& cfg,
                                int levels);

}  // namespace irs
