#include "irs/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace irs {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidInput, what);
}

ComplexVector circular_gaussian(Index n, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  ComplexVector h(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    h(i) = {re, im};
  }
  return h;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(antennas >= 1, "antennas must be >= 1");
  require(elements >= 0, "elements must be >= 0");
  require(ps_w > 0 && std::isfinite(ps_w), "ps_w must be > 0");
  require(sigma2_w > 0 && std::isfinite(sigma2_w), "sigma2 must be > 0");
  require(zeta > 0 && zeta <= 1, "zeta must lie in (0, 1]");
  require(r0 > 0 && std::isfinite(r0), "r0 must be > 0");
  for (double d : {d_ap_irs, d_ap_bob, d_ap_ehr, d_ap_eve, d_irs_bob, d_irs_ehr, d_irs_eve}) {
    require(d > 0 && std::isfinite(d), "distances must be > 0");
  }
  require(std::isfinite(alpha_direct) && std::isfinite(alpha_irs), "path-loss exponents must be finite");
  require(std::isfinite(pl_ref_db), "pl_ref_db must be finite");
  require(solver.epsilon > 0, "epsilon must be > 0");
  require(solver.max_outer >= 1 && solver.max_inner_w >= 1 && solver.max_inner_u >= 1,
          "iteration caps must be >= 1");
  require(solver.eps_bisect > 0, "eps_bisect must be > 0");
  require(solver.randomizations >= 1, "randomizations must be >= 1");
  require(solver.sdp_tol > 0, "sdp_tol must be > 0");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

double path_loss_gain(double distance, double exponent, double pl_ref_db) {
  if (!(distance > 0)) throw Error(ErrorCode::InvalidInput, "path_loss_gain: distance must be > 0");
  return std::pow(10.0, -pl_ref_db / 10.0) * std::pow(distance, -exponent);
}

ComplexVector ula_response(Index n, double angle_deg) {
  const double s = std::sin(angle_deg * std::numbers::pi / 180.0);
  ComplexVector a(n);
  for (Index k = 0; k < n; ++k) a(k) = std::polar(1.0, std::numbers::pi * double(k) * s);
  return a;
}

ChannelSet generate_scenario(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const Index m = cfg.antennas;
  const Index n = cfg.elements;
  const auto gain = [&](double d, double alpha) { return path_loss_gain(d, alpha, cfg.pl_ref_db); };

  ChannelSet ch;
  ch.h_ab = circular_gaussian(m, gain(cfg.d_ap_bob, cfg.alpha_direct), rng);
  ch.h_ah = circular_gaussian(m, gain(cfg.d_ap_ehr, cfg.alpha_direct), rng);
  ch.h_ae = circular_gaussian(m, gain(cfg.d_ap_eve, cfg.alpha_direct), rng);
  ch.h_ib = circular_gaussian(n, gain(cfg.d_irs_bob, cfg.alpha_irs), rng);
  ch.h_ih = circular_gaussian(n, gain(cfg.d_irs_ehr, cfg.alpha_irs), rng);
  ch.h_ie = circular_gaussian(n, gain(cfg.d_irs_eve, cfg.alpha_irs), rng);

  const double los = std::sqrt(gain(cfg.d_ap_irs, cfg.alpha_irs));
  ch.G = los * ula_response(n, cfg.arrival_deg) * ula_response(m, cfg.departure_deg).adjoint();
  restack(ch);
  return ch;
}

ChannelSet generate_scenario(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return generate_scenario(cfg, rng);
}

ChannelSet without_irs(const ChannelSet& ch) {
  ChannelSet out;
  out.G = ComplexMatrix(0, ch.antennas());
  out.h_ab = ch.h_ab;
  out.h_ah = ch.h_ah;
  out.h_ae = ch.h_ae;
  out.h_ib = ComplexVector(0);
  out.h_ih = ComplexVector(0);
  out.h_ie = ComplexVector(0);
  restack(out);
  return out;
}

}  // namespace irs
