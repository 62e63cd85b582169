#include "irs/metrics.hpp"

#include <cmath>
#include <sstream>

namespace irs {

PhaseProfile::PhaseProfile(ComplexVector u) : u_(std::move(u)) {
  for (Index i = 0; i < u_.size(); ++i) {
    if (!(std::abs(std::abs(u_(i)) - 1.0) <= 1e-12)) {
      throw Error(ErrorCode::InvalidInput, "PhaseProfile: entry " + std::to_string(i) + " is not unit modulus");
    }
  }
}

PhaseProfile PhaseProfile::from_angles(const RealVector& theta) {
  ComplexVector u(theta.size());
  for (Index i = 0; i < theta.size(); ++i) u(i) = std::polar(1.0, -theta(i));
  return PhaseProfile(std::move(u));
}

PhaseProfile PhaseProfile::project(const ComplexVector& x) {
  ComplexVector u(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double r = std::abs(x(i));
    u(i) = r > 0 && std::isfinite(r) ? std::polar(1.0, std::arg(x(i))) : cdouble(1.0, 0.0);
  }
  return PhaseProfile(std::move(u));
}

ComplexVector PhaseProfile::v() const { return augment(u_); }

FeasibilityReport check_feasible(const ComplexVector& w, const ComplexVector& u, const ScenarioConfig& cfg,
                                 const ChannelSet& ch, const FeasibilityTolerance& tol) {
  FeasibilityReport rep;
  const double s2 = cfg.sigma2_w;
  const double gb = std::norm(effective_gain(ch.H_b, u, w));
  const double ge = std::norm(effective_gain(ch.H_e, u, w));
  rep.sr_slack = std::log2((gb + s2) / (ge + s2)) - cfg.r0;
  rep.power_slack = (cfg.ps_w - w.squaredNorm()) / cfg.ps_w;
  for (Index i = 0; i < u.size(); ++i) rep.modulus_dev = std::max(rep.modulus_dev, std::abs(std::abs(u(i)) - 1.0));

  auto flag = [&](const char* what, double value) {
    std::ostringstream os;
    os << what << " " << value;
    rep.violations.push_back(os.str());
    rep.feasible = false;
  };
  if (!(rep.sr_slack >= -tol.sr)) flag("secrecy-rate slack", rep.sr_slack);
  if (!(rep.power_slack >= -tol.power)) flag("power slack", rep.power_slack);
  if (!(rep.modulus_dev <= tol.modulus)) flag("unit-modulus deviation", rep.modulus_dev);
  return rep;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Failed: return "Failed";
  }
  return "Failed";
}

std::optional<SolveStatus> parse_status(const std::string& s) {
  for (auto st : {SolveStatus::Converged, SolveStatus::MaxIters, SolveStatus::Infeasible, SolveStatus::Failed}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

}  // namespace irs
