#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irs/channel.hpp"

namespace irs {

/// Unit-modulus IRS vector u (entries e^{-j theta_n}) and its augmentation v = [u; 1].
class PhaseProfile {
 public:
  PhaseProfile() = default;

  /// Throws InvalidInput unless every |u_n| is 1 within 1e-12.
  explicit PhaseProfile(ComplexVector u);

  static PhaseProfile ones(Index n) { return PhaseProfile(ComplexVector::Ones(n)); }
  /// u_n = exp(-j theta_n), so that Theta = diag(exp(j theta)) = diag(conj(u)).
  static PhaseProfile from_angles(const RealVector& theta);
  /// Entrywise projection x_n / |x_n| onto the unit circle; zero entries map to 1.
  static PhaseProfile project(const ComplexVector& x);

  Index size() const { return u_.size(); }
  const ComplexVector& u() const { return u_; }
  ComplexVector v() const;

 private:
  ComplexVector u_;
};

template <typename Real>
CVector<Real> augment(const CVector<Real>& u) {
  CVector<Real> v(u.size() + 1);
  v.head(u.size()) = u;
  v(u.size()) = Real(1);
  return v;
}

struct Beamformer {
  ComplexVector w;
  double power() const { return w.squaredNorm(); }
};

/// v^H H w with v = [u; 1].
template <typename Real>
std::complex<Real> effective_gain(const CMatrix<Real>& h, const CVector<Real>& u, const CVector<Real>& w) {
  if (h.rows() != u.size() + 1 || h.cols() != w.size()) {
    throw Error(ErrorCode::InvalidInput, "effective_gain: dimension mismatch");
  }
  return augment(u).dot(h * w);
}

template <typename Real>
Real rate_bob(const CVector<Real>& w, const CVector<Real>& u, const BasicChannelSet<Real>& ch, Real sigma2) {
  return std::log2(Real(1) + std::norm(effective_gain(ch.H_b, u, w)) / sigma2);
}

template <typename Real>
Real rate_eve(const CVector<Real>& w, const CVector<Real>& u, const BasicChannelSet<Real>& ch, Real sigma2) {
  return std::log2(Real(1) + std::norm(effective_gain(ch.H_e, u, w)) / sigma2);
}

template <typename Real>
Real secrecy_rate(const CVector<Real>& w, const CVector<Real>& u, const BasicChannelSet<Real>& ch, Real sigma2) {
  return std::max(Real(0), rate_bob(w, u, ch, sigma2) - rate_eve(w, u, ch, sigma2));
}

/// zeta * |v^H H_r w|^2, in watts.
template <typename Real>
Real harvested_power(const CVector<Real>& w, const CVector<Real>& u, const BasicChannelSet<Real>& ch, Real zeta) {
  return zeta * std::norm(effective_gain(ch.H_r, u, w));
}

struct FeasibilityReport {
  bool feasible = true;
  double sr_slack = 0;        // log2((|b|^2+s2)/(|e|^2+s2)) - r0, bits/s/Hz
  double power_slack = 0;     // (Ps - ||w||^2) / Ps
  double modulus_dev = 0;     // max_n ||u_n| - 1|
  std::vector<std::string> violations;
};

struct FeasibilityTolerance {
  double sr = 1e-6;
  double power = 1e-9;
  double modulus = 1e-12;
};

FeasibilityReport check_feasible(const ComplexVector& w, const ComplexVector& u, const ScenarioConfig& cfg,
                                 const ChannelSet& ch, const FeasibilityTolerance& tol = {});

enum class SolveStatus { Converged, MaxIters, Infeasible, Failed };

const char* to_string(SolveStatus s);
std::optional<SolveStatus> parse_status(const std::string& s);

struct SolveResult {
  Beamformer w;
  PhaseProfile u;
  /// Harvested power per AO iteration in watts, index 0 = initial phases.
  /// For the SDR method this is the relaxed objective.
  std::vector<double> harvested_trace;
  double harvested_w = 0;  // final rank-one harvested power
  double achieved_sr = 0;
  SolveStatus status = SolveStatus::Failed;
  int iters_outer = 0;
  int iters_inner_w = 0;
  int iters_inner_u = 0;
  double wall_clock = 0;
  std::optional<double> relaxation_value;  // SDR only, watts
  std::string message;
};

}  // namespace irs
