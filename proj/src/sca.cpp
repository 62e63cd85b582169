#include "irs/sca.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace irs {

namespace {

// Maximizer of Re{q^H w} - s |e_hat^H w|^2 over ||w|| <= 1 (s >= 0, e_hat unit
// or zero): w = (nu I + s e_hat e_hat^H)^{-1} q / 2 with nu chosen so ||w|| = 1.
class BallMaximizer {
 public:
  BallMaximizer(const ComplexVector& q, const ComplexVector& e_hat, double s) : s_(s) {
    par_ = ComplexVector::Zero(q.size());
    if (e_hat.size() > 0 && e_hat.squaredNorm() > 0) par_ = e_hat * e_hat.dot(q);
    perp_ = q - par_;
    perp2_ = perp_.squaredNorm();
    par2_ = par_.squaredNorm();
  }

  ComplexVector solve() const {
    const double total = perp2_ + par2_;
    if (total == 0) return ComplexVector::Zero(perp_.size());
    // nu = 0 is admissible only when q lies along e_hat.
    if (perp2_ <= 1e-30 * total && s_ > 0 && par2_ <= 4 * s_ * s_) return par_ / (2 * s_);

    double lo = std::max({std::sqrt(perp2_) / 2, std::sqrt(par2_) / 2 - s_, 0.0});
    double hi = std::sqrt(total) / 2;
    double nu = hi;
    for (int it = 0; it < 100; ++it) {
      // Newton on phi(nu) = 1/||w(nu)|| - 1, which is close to linear.
      const double n2 = norm2(nu);
      const double dn2 = -perp2_ / (2 * nu * nu * nu) - par2_ / (2 * std::pow(nu + s_, 3));
      const double phi = 1 / std::sqrt(n2) - 1;
      if (phi < 0) {
        lo = nu;
      } else {
        hi = nu;
      }
      if (std::abs(phi) < 1e-15 || hi - lo <= 1e-16 * hi) break;
      const double dphi = -0.5 * dn2 / (n2 * std::sqrt(n2));
      double next = nu - phi / dphi;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      nu = next;
    }
    ComplexVector w = perp_ / (2 * nu) + par_ / (2 * (nu + s_));
    const double n = w.norm();
    if (n > 1) w /= n;  // round-off overshoot
    return w;
  }

 private:
  double norm2(double nu) const { return perp2_ / (4 * nu * nu) + par2_ / (4 * (nu + s_) * (nu + s_)); }

  double s_;
  ComplexVector par_, perp_;
  double perp2_ = 0, par2_ = 0;
};

struct Surrogate {
  ComplexVector g, p, e_hat;
  double e2 = 0, c = 0, kappa = 2;

  // kappa |e^H w|^2 - Re{p^H w} + c
  double constraint(const ComplexVector& w) const {
    return kappa * e2 * std::norm(e_hat.dot(w)) - std::real(p.dot(w)) + c;
  }
  ComplexVector maximizer(double lambda) const {
    return BallMaximizer(g + lambda * p, e_hat, lambda * kappa * e2).solve();
  }
};

ComplexVector gaussian_unit_phases(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 2 * std::numbers::pi);
  ComplexVector u(n);
  for (Index i = 0; i < n; ++i) u(i) = std::polar(1.0, uni(rng));
  return u;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ComplexVector sca_w_step(const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w_prev) {
  const ComplexVector v = augment(u);
  const ComplexVector hr = p.Hr.adjoint() * v;
  const ComplexVector hb = p.Hb.adjoint() * v;
  const ComplexVector he = p.He.adjoint() * v;

  Surrogate sg;
  sg.kappa = p.kappa;
  sg.g = 2.0 * hr * hr.dot(w_prev);
  sg.p = 2.0 * hb * hb.dot(w_prev);
  sg.e2 = he.squaredNorm();
  sg.e_hat = sg.e2 > 0 ? ComplexVector(he / std::sqrt(sg.e2)) : ComplexVector::Zero(he.size());
  sg.c = p.kappa + std::norm(hb.dot(w_prev)) - 1.0;

  ComplexVector w = sg.maximizer(0.0);
  if (sg.constraint(w) > 0) {
    const double pn = sg.p.norm();
    double hi = pn > 0 ? std::max(sg.g.norm() / pn, 1e-300) : 1.0;
    double lo = 0;
    int doublings = 0;
    while (sg.constraint(sg.maximizer(hi)) > 0) {
      lo = hi;
      hi *= 2;
      if (++doublings > 2000) throw Error(ErrorCode::NumericalFailure, "sca_w_step: surrogate infeasible");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sg.constraint(sg.maximizer(mid)) > 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    w = sg.maximizer(hi);
  }
  const double n = w.norm();
  if (n > 1) w /= n;
  return w;
}

BeamLoop optimize_w_sca(const ScaledProblem& p, const ComplexVector& u, const ComplexVector& w0, int max_steps,
                        double tol) {
  BeamLoop out{w0, 0};
  double value = p.gain_r(u, w0);
  for (int k = 0; k < max_steps; ++k) {
    const ComplexVector w = sca_w_step(p, u, out.w);
    ++out.steps;
    const double next = p.gain_r(u, w);
    if (!(next >= value) || !p.sr_ok(u, w)) break;
    const double rel = next > 0 ? (next - value) / next : 0.0;
    out.w = w;
    value = next;
    if (rel < tol) break;
  }
  return out;
}

PhaseSubproblemData build_phase_data(const ScaledProblem& p, const ComplexVector& w, const ComplexVector& u_prev) {
  const Index n = p.elements();
  if (u_prev.size() != n) throw Error(ErrorCode::InvalidInput, "build_phase_data: phase dimension mismatch");
  PhaseSubproblemData s;
  s.kappa = p.kappa;
  s.u_tilde = u_prev;

  const ComplexVector rw = p.Hr * w;
  const ComplexVector bw = p.Hb * w;
  const ComplexVector ew = p.He * w;
  s.a = rw.head(n);
  s.alpha = rw(n);
  s.b = bw.head(n);
  s.beta = bw(n);
  s.c = ew.head(n);
  s.gamma = ew(n);

  s.A = HermitianMatrix::outer(s.c, p.kappa) - HermitianMatrix::outer(s.b);
  s.lambda_max_A = rank_two_max_eigval(s.c, s.b, p.kappa);

  const cdouble a_u = s.a.dot(u_prev);  // a^H u
  const cdouble b_u = s.b.dot(u_prev);
  const cdouble c_u = s.c.dot(u_prev);
  const double lam = s.lambda_max_A;

  // (M - A) u with M = lambda_max(A) I
  const ComplexVector mau = lam * u_prev - p.kappa * s.c * c_u + s.b * b_u;
  const double u_mau = lam * u_prev.squaredNorm() - p.kappa * std::norm(c_u) + std::norm(b_u);

  s.d = s.a * a_u + s.a * std::conj(s.alpha);
  s.c1 = std::norm(s.alpha) - std::norm(a_u);
  s.f = mau + s.b * std::conj(s.beta) - p.kappa * s.c * std::conj(s.gamma);
  s.c2 = double(n) * lam + u_mau + p.kappa * (std::norm(s.gamma) + 1.0) - std::norm(s.beta) - 1.0;
  return s;
}

ComplexVector u_of_mu(const ComplexVector& d, const ComplexVector& f, double mu) {
  ComplexVector u(d.size());
  for (Index i = 0; i < d.size(); ++i) {
    const cdouble z = d(i) + mu * f(i);
    u(i) = z == cdouble(0) ? cdouble(1) : std::polar(1.0, std::arg(z));
  }
  return u;
}

double dual_slope(const ComplexVector& d, const ComplexVector& f, double mu) {
  return 2.0 * std::real(u_of_mu(d, f, mu).dot(f));
}

MuSearch bisect_mu(const PhaseSubproblemData& data, double eps_bisect) {
  const auto& d = data.d;
  const auto& f = data.f;
  const double c2 = data.c2;
  const double tol = eps_bisect * (1.0 + std::abs(c2));
  auto g = [&](double mu) { return dual_slope(d, f, mu); };

  MuSearch out;
  const double g0 = g(0.0);
  if (g0 >= c2) {
    out.u = u_of_mu(d, f, 0.0);
    out.residual = g0 - c2;
    return out;
  }
  if (2.0 * f.cwiseAbs().sum() < c2) {
    throw Error(ErrorCode::PhaseStepInfeasible, "bisect_mu: linearized constraint unattainable");
  }

  double lo = 0, hi = 1.0;
  double g_hi = g(hi);
  int doublings = 0;
  while (g_hi < c2) {
    lo = hi;
    hi *= 2;
    g_hi = g(hi);
    if (++doublings > 1100) throw Error(ErrorCode::PhaseStepInfeasible, "bisect_mu: no finite multiplier");
  }
  int it = 0;
  while (g_hi - c2 > tol && hi - lo > 1e-16 * hi && it < 300) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if (g_mid >= c2) {
      hi = mid;
      g_hi = g_mid;
    } else {
      lo = mid;
    }
    ++it;
  }
  out.mu = hi;
  out.u = u_of_mu(d, f, hi);
  out.residual = g_hi - c2;
  out.iterations = doublings + it;
  return out;
}

PhaseLoop optimize_u_sca(const ScaledProblem& p, const ComplexVector& w, const ComplexVector& u0,
                         int max_refinements, double tol, double eps_bisect) {
  PhaseLoop out{u0, 0, false};
  double value = p.gain_r(u0, w);
  for (int k = 0; k < max_refinements; ++k) {
    const auto data = build_phase_data(p, w, out.u);
    MuSearch ms;
    try {
      ms = bisect_mu(data, eps_bisect);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PhaseStepInfeasible) throw;
      out.infeasible_step = true;
      break;
    }
    ++out.refinements;
    const double next = p.gain_r(ms.u, w);
    if (!(next >= value) || !p.sr_ok(ms.u, w)) break;
    const double rel = next > 0 ? (next - value) / next : 0.0;
    out.u = ms.u;
    value = next;
    if (rel < tol) break;
  }
  return out;
}

ComplexVector initial_phases(Index n, PhaseInit init, std::mt19937_64& rng) {
  return init == PhaseInit::Random ? gaussian_unit_phases(n, rng) : ComplexVector::Ones(n);
}

SolveResult sca_ao(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScaledProblem p = ScaledProblem::from(ch, cfg);
  const auto& opt = cfg.solver;
  const Index n = p.elements();

  SolveResult r;
  ComplexVector u = initial_phases(n, opt.phase_init, rng);
  ComplexVector w = max_secrecy_beamformer(p, u);
  fill_final(r, p, u, w, ch, cfg);
  if (!p.sr_ok(u, w)) {
    r.status = SolveStatus::Infeasible;
    r.message = "secrecy target unattainable at the initial phases";
    r.wall_clock = seconds_since(t0);
    return r;
  }

  double value = p.watts(p.gain_r(u, w));
  r.harvested_trace.push_back(value);
  r.status = SolveStatus::MaxIters;
  for (int t = 1; t <= opt.max_outer; ++t) {
    const BeamLoop bl = optimize_w_sca(p, u, w, opt.max_inner_w, opt.inner_tol);
    w = bl.w;
    r.iters_inner_w += bl.steps;
    if (n > 0) {
      const PhaseLoop pl = optimize_u_sca(p, w, u, opt.max_inner_u, opt.inner_tol, opt.eps_bisect);
      u = pl.u;
      r.iters_inner_u += pl.refinements;
    }
    const double next = p.watts(p.gain_r(u, w));
    r.harvested_trace.push_back(next);
    r.iters_outer = t;
    const double rel = next > 0 ? (next - value) / next : 0.0;
    value = next;
    if (rel < opt.epsilon) {
      r.status = SolveStatus::Converged;
      break;
    }
  }
  fill_final(r, p, u, w, ch, cfg);
  r.wall_clock = seconds_since(t0);
  return r;
}

SolveResult optimize_beamformer(const ChannelSet& ch, const ScenarioConfig& cfg, const ComplexVector& u) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScaledProblem p = ScaledProblem::from(ch, cfg);
  SolveResult r;
  ComplexVector w = max_secrecy_beamformer(p, u);
  fill_final(r, p, u, w, ch, cfg);
  if (!p.sr_ok(u, w)) {
    r.status = SolveStatus::Infeasible;
    r.message = "secrecy target unattainable for the given phases";
    r.wall_clock = seconds_since(t0);
    return r;
  }
  double value = p.watts(p.gain_r(u, w));
  r.harvested_trace.push_back(value);
  r.status = SolveStatus::MaxIters;
  for (int t = 1; t <= cfg.solver.max_outer; ++t) {
    const ComplexVector next_w = sca_w_step(p, u, w);
    r.iters_inner_w++;
    r.iters_outer = t;
    const double next = p.watts(p.gain_r(u, next_w));
    if (next >= value && p.sr_ok(u, next_w)) w = next_w;
    const double rel = next > value ? (next - value) / next : 0.0;
    value = std::max(value, next);
    r.harvested_trace.push_back(value);
    if (rel < cfg.solver.inner_tol) {
      r.status = SolveStatus::Converged;
      break;
    }
  }
  fill_final(r, p, u, w, ch, cfg);
  r.wall_clock = seconds_since(t0);
  return r;
}

}  // namespace irs
