#pragma once

#include <cstdint>
#include <random>

#include "irs/linalg.hpp"

namespace irs {

enum class PhaseInit { Zero, Random };

/// Iteration controls shared by the alternating-optimization solvers.
struct SolverOptions {
  double epsilon = 1e-3;        // outer stop: (E(t) - E(t-1)) / E(t) < epsilon
  int max_outer = 100;
  int max_inner_w = 30;         // L1
  int max_inner_u = 30;         // L2
  double inner_tol = 1e-6;      // relative change that ends an inner loop
  double eps_bisect = 1e-8;
  int randomizations = 1000;
  double sdp_tol = 1e-9;
  PhaseInit phase_init = PhaseInit::Zero;
};

/// Physical scenario. Powers in watts, distances in meters.
struct ScenarioConfig {
  int antennas = 4;   // M
  int elements = 50;  // N; 0 means no IRS
  double ps_w = 15.0;
  double sigma2_w = 1e-10;  // -70 dBm
  double zeta = 0.5;
  double r0 = 1.0;          // bits/s/Hz

  double d_ap_irs = 8.0;
  double d_ap_bob = 220.0;
  double d_ap_ehr = 6.0;
  double d_ap_eve = 85.0;
  double d_irs_bob = 214.0;
  double d_irs_ehr = 2.0;
  double d_irs_eve = 80.0;

  double alpha_direct = 3.0;
  double alpha_irs = 2.0;
  double pl_ref_db = 30.0;

  // LoS AP->IRS array geometry (uniform linear arrays, half-wavelength spacing).
  double departure_deg = 30.0;
  double arrival_deg = 60.0;

  std::uint64_t seed = 1;
  SolverOptions solver;

  /// Throws InvalidInput on the first violated invariant.
  void validate() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double w);

/// 10^(-pl_ref_db/10) * distance^(-exponent)
double path_loss_gain(double distance, double exponent, double pl_ref_db);

/// Channel responses. Vectors hold h such that the channel row is h^H.
/// The stacked matrices satisfy H_x = [diag(h_ix^H) G; h_ax^H].
template <typename Real>
struct BasicChannelSet {
  CMatrix<Real> G;  // N x M, AP -> IRS
  CVector<Real> h_ab, h_ah, h_ae;
  CVector<Real> h_ib, h_ih, h_ie;
  CMatrix<Real> H_r, H_b, H_e;

  Index antennas() const { return G.cols(); }
  Index elements() const { return G.rows(); }

  template <typename Other>
  BasicChannelSet<Other> cast() const {
    using C = std::complex<Other>;
    BasicChannelSet<Other> o;
    o.G = G.template cast<C>();
    o.h_ab = h_ab.template cast<C>();
    o.h_ah = h_ah.template cast<C>();
    o.h_ae = h_ae.template cast<C>();
    o.h_ib = h_ib.template cast<C>();
    o.h_ih = h_ih.template cast<C>();
    o.h_ie = h_ie.template cast<C>();
    o.H_r = H_r.template cast<C>();
    o.H_b = H_b.template cast<C>();
    o.H_e = H_e.template cast<C>();
    return o;
  }
};

using ChannelSet = BasicChannelSet<double>;

/// [diag(h_i^H) G; h_a^H]
template <typename Real>
CMatrix<Real> stack_effective(const CMatrix<Real>& G, const CVector<Real>& h_direct,
                              const CVector<Real>& h_irs) {
  if (h_direct.size() != G.cols() || h_irs.size() != G.rows()) {
    throw Error(ErrorCode::InvalidInput, "stack_effective: dimension mismatch");
  }
  const Index n = G.rows();
  CMatrix<Real> h(n + 1, G.cols());
  h.topRows(n) = h_irs.conjugate().asDiagonal() * G;
  h.row(n) = h_direct.adjoint();
  return h;
}

/// Fills H_r, H_b, H_e from the raw responses.
template <typename Real>
void restack(BasicChannelSet<Real>& ch) {
  ch.H_r = stack_effective(ch.G, ch.h_ah, ch.h_ih);
  ch.H_b = stack_effective(ch.G, ch.h_ab, ch.h_ib);
  ch.H_e = stack_effective(ch.G, ch.h_ae, ch.h_ie);
}

/// Uniform linear array response exp(j*pi*k*sin(angle)), k = 0..n-1.
ComplexVector ula_response(Index n, double angle_deg);

/// Draws a scenario. Direct links are drawn before IRS links, so the direct
/// channels for a given seed do not depend on N.
ChannelSet generate_scenario(const ScenarioConfig& cfg, std::mt19937_64& rng);

/// Convenience: seeds a generator with cfg.seed.
ChannelSet generate_scenario(const ScenarioConfig& cfg);

/// Same direct links, IRS removed (N = 0).
ChannelSet without_irs(const ChannelSet& ch);

}  // namespace irs
