#pragma once

// Normalized problem data shared by the SDR and SCA solvers. Channels are
// scaled by sqrt(Ps)/sigma, so the noise power is 1 and the power budget is 1:
//
//   harvested watts = zeta * sigma^2 * |v^H Hr w|^2,   w_physical = sqrt(Ps) w.

#include "irs/channel.hpp"
#include "irs/metrics.hpp"

namespace irs {

struct ScaledProblem {
  ComplexMatrix Hr, Hb, He;  // (N+1) x M
  double kappa = 2.0;        // 2^r0
  double zeta = 1.0;
  double sigma2 = 1.0;
  double ps = 1.0;

  static ScaledProblem from(const ChannelSet& ch, const ScenarioConfig& cfg);

  Index antennas() const { return Hr.cols(); }
  Index elements() const { return Hr.rows() - 1; }

  double watts(double normalized_power) const { return zeta * sigma2 * normalized_power; }
  ComplexVector physical(const ComplexVector& w) const { return std::sqrt(ps) * w; }
  ComplexVector normalized(const ComplexVector& w) const { return w / std::sqrt(ps); }

  /// |v^H H w|^2 for the normalized channels.
  double gain_r(const ComplexVector& u, const ComplexVector& w) const { return std::norm(effective_gain(Hr, u, w)); }
  double gain_b(const ComplexVector& u, const ComplexVector& w) const { return std::norm(effective_gain(Hb, u, w)); }
  double gain_e(const ComplexVector& u, const ComplexVector& w) const { return std::norm(effective_gain(He, u, w)); }

  /// (1 + |b|^2) - kappa (1 + |e|^2); nonnegative iff the secrecy constraint holds.
  double sr_margin(const ComplexVector& u, const ComplexVector& w) const {
    return 1.0 + gain_b(u, w) - kappa * (1.0 + gain_e(u, w));
  }
  /// sr_margin >= 0 up to a 1e-10 relative rounding allowance.
  bool sr_ok(const ComplexVector& u, const ComplexVector& w) const {
    return sr_margin(u, w) >= -1e-10 * (1.0 + gain_b(u, w));
  }
  double secrecy(const ComplexVector& u, const ComplexVector& w) const {
    return std::log2((1.0 + gain_b(u, w)) / (1.0 + gain_e(u, w)));
  }
};

/// Unit vector maximizing (1 + |hb^H w|^2) / (1 + |he^H w|^2): the principal
/// generalized eigenvector of (I + hb hb^H, I + he he^H).
ComplexVector max_secrecy_direction(const ComplexVector& hb, const ComplexVector& he);

/// Full-power max-secrecy beamformer for the given phases (normalized units).
ComplexVector max_secrecy_beamformer(const ScaledProblem& p, const ComplexVector& u);

/// Builds the SolveResult fields that depend only on the final (w, u).
void fill_final(SolveResult& r, const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w,
                const ChannelSet& ch, const ScenarioConfig& cfg);

}  // namespace irs
