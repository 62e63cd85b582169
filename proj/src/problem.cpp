#include "irs/problem.hpp"

#include <Eigen/Eigenvalues>

namespace irs {

ScaledProblem ScaledProblem::from(const ChannelSet& ch, const ScenarioConfig& cfg) {
  cfg.validate();
  ScaledProblem p;
  const double s = std::sqrt(cfg.ps_w / cfg.sigma2_w);
  p.Hr = s * ch.H_r;
  p.Hb = s * ch.H_b;
  p.He = s * ch.H_e;
  p.kappa = std::exp2(cfg.r0);
  p.zeta = cfg.zeta;
  p.sigma2 = cfg.sigma2_w;
  p.ps = cfg.ps_w;
  return p;
}

ComplexVector max_secrecy_direction(const ComplexVector& hb, const ComplexVector& he) {
  const Index m = hb.size();
  if (m == 1) return ComplexVector::Ones(1);
  const ComplexMatrix a = ComplexMatrix::Identity(m, m) + hb * hb.adjoint();
  const ComplexMatrix b = ComplexMatrix::Identity(m, m) + he * he.adjoint();
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> es(a, b);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "max_secrecy_direction");
  ComplexVector w = es.eigenvectors().col(m - 1);
  return w.normalized();
}

ComplexVector max_secrecy_beamformer(const ScaledProblem& p, const ComplexVector& u) {
  const ComplexVector v = augment(u);
  return max_secrecy_direction(p.Hb.adjoint() * v, p.He.adjoint() * v);
}

void fill_final(SolveResult& r, const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w,
                const ChannelSet& ch, const ScenarioConfig& cfg) {
  r.u = PhaseProfile(u);
  r.w.w = p.physical(w);
  r.harvested_w = harvested_power(r.w.w, u, ch, cfg.zeta);
  r.achieved_sr = secrecy_rate(r.w.w, u, ch, cfg.sigma2_w);
}

}  // namespace irs
