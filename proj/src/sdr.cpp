#include "irs/sdr.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "irs/sca.hpp"

namespace irs {

namespace {

using Sdp = SdpProblem<cdouble>;

double scale_of(const ComplexMatrix& a) {
  const double s = a.cwiseAbs().maxCoeff();
  return s > 0 ? s : 1.0;
}

SdpOptions with_tol(SdpOptions opt, double tol) {
  opt.tol = std::min(opt.tol, tol);
  return opt;
}

// Largest SR-feasible value among trace-form quadratics x^H R x, where the
// secrecy test is 1 + x^H Rb x >= kappa (1 + x^H Re x).
struct Scored {
  double value = -1;
  bool feasible = false;
};

Scored score(const ComplexVector& x, const ComplexMatrix& rr, const ComplexMatrix& rb, const ComplexMatrix& re,
             double kappa) {
  const double vr = std::real(x.dot(rr * x));
  const double vb = std::real(x.dot(rb * x));
  const double ve = std::real(x.dot(re * x));
  const double margin = 1 + vb - kappa * (1 + ve);
  return {vr, margin >= -1e-10 * (1 + vb)};
}

ComplexVector circular_gaussian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexVector r(n);
  for (Index i = 0; i < n; ++i) {
    const double re = g(rng);
    r(i) = cdouble(re, g(rng));
  }
  return r;
}

// v = [u; 1] from a raw candidate: divide by the last entry, then project.
ComplexVector phases_from(const ComplexVector& x) {
  const Index n = x.size() - 1;
  const cdouble last = x(n);
  ComplexVector u(n);
  for (Index i = 0; i < n; ++i) {
    const cdouble y = std::abs(last) > 0 ? x(i) / last : x(i);
    u(i) = std::abs(y) > 0 ? y / std::abs(y) : cdouble(1.0);
  }
  return u;
}

// Scales V to an exact unit diagonal and W to tr(W) <= 1.
HermitianMatrix unit_diagonal(const ComplexMatrix& x) {
  RealVector d = x.diagonal().real().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return HermitianMatrix::symmetrized(d.asDiagonal() * x * d.asDiagonal());
}

HermitianMatrix power_capped(const ComplexMatrix& x) {
  HermitianMatrix w = HermitianMatrix::symmetrized(x);
  const double t = w.trace();
  return t > 1 ? w * (1 / t) : w;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double relaxed_value(const ScaledProblem& p, const HermitianMatrix& w, const HermitianMatrix& v) {
  return std::real((p.Hr.adjoint() * v.matrix() * p.Hr * w.matrix()).trace());
}

SdrStep solve_w_sdp(const ScaledProblem& p, const HermitianMatrix& v, const SdpOptions& opt) {
  const Index m = p.antennas();
  if (v.dim() != p.Hr.rows()) throw Error(ErrorCode::InvalidInput, "solve_w_sdp: V dimension mismatch");
  const ComplexMatrix qr = p.Hr.adjoint() * v.matrix() * p.Hr;
  const ComplexMatrix f = p.Hb.adjoint() * v.matrix() * p.Hb - p.kappa * (p.He.adjoint() * v.matrix() * p.He);
  const double sr = scale_of(qr);
  const double sf = scale_of(f);

  Sdp sdp;
  const int b = sdp.add_block(m);
  sdp.set_objective(b, qr / sr);
  sdp.add_constraint({Sdp::dense_term(b, ComplexMatrix::Identity(m, m))}, Relation::LessEqual, 1.0);
  sdp.add_constraint({Sdp::dense_term(b, f / sf)}, Relation::GreaterEqual, (p.kappa - 1) / sf);
  const auto sol = solve_sdp(sdp, opt);

  SdrStep out;
  out.status = sol.status;
  if (sol.status == SdpStatus::Optimal) {
    out.X = power_capped(sol.blocks[0]);
    out.value = relaxed_value(p, out.X, v);
  }
  return out;
}

SdrStep solve_v_sdp(const ScaledProblem& p, const HermitianMatrix& w, const SdpOptions& opt) {
  const Index n1 = p.Hr.rows();
  if (w.dim() != p.antennas()) throw Error(ErrorCode::InvalidInput, "solve_v_sdp: W dimension mismatch");
  const ComplexMatrix rr = p.Hr * w.matrix() * p.Hr.adjoint();
  const ComplexMatrix f = p.Hb * w.matrix() * p.Hb.adjoint() - p.kappa * (p.He * w.matrix() * p.He.adjoint());
  const double sr = scale_of(rr);
  const double sf = scale_of(f);

  Sdp sdp;
  const int b = sdp.add_block(n1);
  sdp.set_objective(b, rr / sr);
  for (Index i = 0; i < n1; ++i) sdp.add_constraint({Sdp::diagonal_term(b, n1, i)}, Relation::Equal, 1.0);
  sdp.add_constraint({Sdp::dense_term(b, f / sf)}, Relation::GreaterEqual, (p.kappa - 1) / sf);
  const auto sol = solve_sdp(sdp, opt);

  SdrStep out;
  out.status = sol.status;
  if (sol.status == SdpStatus::Optimal) {
    out.X = unit_diagonal(sol.blocks[0]);
    out.value = relaxed_value(p, w, out.X);
  }
  return out;
}

ComplexVector randomize_w(const HermitianMatrix& w, const ComplexVector& u, const ScaledProblem& p, int count,
                          std::mt19937_64& rng) {
  const ComplexVector v = augment(u);
  const ComplexVector hr = p.Hr.adjoint() * v, hb = p.Hb.adjoint() * v, he = p.He.adjoint() * v;
  const ComplexMatrix s = psd_sqrt(w);
  // Every candidate is evaluated at full power; scaling up never breaks the
  // secrecy constraint once it holds, because kappa > 1.
  auto eval = [&](const ComplexVector& x, ComplexVector& best, double& best_val) {
    const double nx = x.norm();
    if (!(nx > 0)) return;
    const ComplexVector c = x / nx;
    const double gb = std::norm(hb.dot(c)), ge = std::norm(he.dot(c));
    if (1 + gb - p.kappa * (1 + ge) < -1e-10 * (1 + gb)) return;
    const double val = std::norm(hr.dot(c));
    if (val > best_val) {
      best_val = val;
      best = c;
    }
  };
  ComplexVector best;
  double best_val = -1;
  const auto eig = herm_eig(w);
  eval(eig.vectors.col(w.dim() - 1), best, best_val);
  for (int l = 0; l < count; ++l) eval(s * circular_gaussian(w.dim(), rng), best, best_val);
  if (best_val < 0) throw Error(ErrorCode::RecoveryFailed, "randomize_w: no secrecy-feasible candidate");
  return best;
}

ComplexVector randomize_v(const HermitianMatrix& v, const HermitianMatrix& w, const ScaledProblem& p, int count,
                          std::mt19937_64& rng) {
  const ComplexMatrix rr = p.Hr * w.matrix() * p.Hr.adjoint();
  const ComplexMatrix rb = p.Hb * w.matrix() * p.Hb.adjoint();
  const ComplexMatrix re = p.He * w.matrix() * p.He.adjoint();
  const ComplexMatrix s = psd_sqrt(v);
  ComplexVector best;
  double best_val = -1;
  auto eval = [&](const ComplexVector& x) {
    const ComplexVector u = phases_from(x);
    const Scored sc = score(augment(u), rr, rb, re, p.kappa);
    if (sc.feasible && sc.value > best_val) {
      best_val = sc.value;
      best = u;
    }
  };
  const auto eig = herm_eig(v);
  eval(eig.vectors.col(v.dim() - 1));
  for (int l = 0; l < count; ++l) eval(s * circular_gaussian(v.dim(), rng));
  if (best_val < 0) throw Error(ErrorCode::RecoveryFailed, "randomize_v: no secrecy-feasible candidate");
  return best;
}

SdrOutcome sdr_ao_detailed(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScaledProblem p = ScaledProblem::from(ch, cfg);
  const auto& opt = cfg.solver;
  const SdpOptions sdp_opt = with_tol(SdpOptions{}, opt.sdp_tol);
  const Index n = p.elements();

  SdrOutcome out;
  SolveResult& r = out.result;
  const ComplexVector u0 = initial_phases(n, opt.phase_init, rng);
  const ComplexVector w0 = max_secrecy_beamformer(p, u0);
  fill_final(r, p, u0, w0, ch, cfg);
  if (!p.sr_ok(u0, w0)) {
    r.status = SolveStatus::Infeasible;
    r.message = "secrecy target unattainable at the initial phases";
    r.wall_clock = seconds_since(t0);
    return out;
  }

  HermitianMatrix V = HermitianMatrix::outer(augment(u0));
  HermitianMatrix W = HermitianMatrix::outer(w0);
  double value = relaxed_value(p, W, V);
  bool hit_cap = false;

  // Incumbent guard: a step replaces the iterate only if its value does not drop.
  auto w_step = [&]() {
    SdrStep s = solve_w_sdp(p, V, sdp_opt);
    r.iters_inner_w++;
    if (s.status == SdpStatus::Optimal && s.value >= value) {
      W = s.X;
      value = s.value;
    }
    out.half_steps.push_back(p.watts(value));
  };
  auto v_step = [&]() {
    SdrStep s = solve_v_sdp(p, W, sdp_opt);
    r.iters_inner_u++;
    if (s.status == SdpStatus::Optimal && s.value >= value) {
      V = s.X;
      value = s.value;
    }
    out.half_steps.push_back(p.watts(value));
  };

  auto run_ao = [&]() {
    w_step();
    r.harvested_trace.push_back(p.watts(value));
    if (n == 0) return;
    for (int t = 1; t <= opt.max_outer; ++t) {
      const double prev = value;
      v_step();
      w_step();
      r.harvested_trace.push_back(p.watts(value));
      r.iters_outer++;
      if (value <= 0 || (value - prev) / value < opt.epsilon) return;
    }
    hit_cap = true;
  };

  ComplexVector best_u = u0, best_w = w0;
  double best = p.gain_r(u0, w0);
  auto consider = [&](const ComplexVector& u, const ComplexVector& w) {
    if (p.sr_ok(u, w) && p.gain_r(u, w) > best) {
      best = p.gain_r(u, w);
      best_u = u;
      best_w = w;
    }
  };

  const int max_restarts = 3;
  for (int round = 0;; ++round) {
    hit_cap = false;
    run_ao();
    ComplexVector u_rec = best_u;
    if (n > 0) {
      try {
        u_rec = randomize_v(V, W, p, opt.randomizations, rng);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RecoveryFailed) throw;
      }
    }
    try {
      consider(u_rec, randomize_w(W, u_rec, p, opt.randomizations, rng));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RecoveryFailed) throw;
    }
    const HermitianMatrix v_rec = HermitianMatrix::outer(augment(u_rec));
    const SdrStep ws = solve_w_sdp(p, v_rec, sdp_opt);
    r.iters_inner_w++;
    if (ws.status == SdpStatus::Optimal) {
      try {
        consider(u_rec, randomize_w(ws.X, u_rec, p, opt.randomizations, rng));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RecoveryFailed) throw;
      }
    }
    consider(u_rec, max_secrecy_beamformer(p, u_rec));
    if (best <= value) break;
    if (round == max_restarts) {
      // The rank-one pair is itself a relaxed point; keep it as the iterate.
      V = HermitianMatrix::outer(augment(best_u));
      W = HermitianMatrix::outer(best_w);
      value = std::max(value, relaxed_value(p, W, V));
      break;
    }
    // The rank-one point beats the relaxed iterate: continue the relaxation from it.
    V = HermitianMatrix::outer(augment(best_u));
    W = HermitianMatrix::outer(best_w);
    value = relaxed_value(p, W, V);
    out.restarts++;
  }

  out.W = W;
  out.V = V;
  fill_final(r, p, best_u, best_w, ch, cfg);
  r.relaxation_value = p.watts(value);
  r.status = hit_cap ? SolveStatus::MaxIters : SolveStatus::Converged;
  r.wall_clock = seconds_since(t0);
  return out;
}

SolveResult sdr_ao(const ChannelSet& ch, const ScenarioConfig& cfg, std::mt19937_64& rng) {
  return sdr_ao_detailed(ch, cfg, rng).result;
}

}  // namespace irs
