#include "irs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace irs {

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

// Largest value over indices [0, count); ties go to the lowest index.
struct Best {
  double value = kNone;
  long long index = -1;
};

Best parallel_argmax(long long count, const std::function<double(long long)>& eval) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const long long workers = std::clamp<long long>(count / 256, 1, hw);
  std::vector<Best> part(workers);
  auto run = [&](long long k) {
    const long long lo = count * k / workers, hi = count * (k + 1) / workers;
    Best b;
    for (long long i = lo; i < hi; ++i) {
      const double v = eval(i);
      if (v > b.value) b = {v, i};
    }
    part[k] = b;
  };
  std::vector<std::thread> pool;
  for (long long k = 1; k < workers; ++k) pool.emplace_back(run, k);
  run(0);
  for (auto& t : pool) t.join();
  Best best;
  for (const Best& b : part) {
    if (b.value > best.value) best = b;
  }
  return best;
}

ComplexVector phases_at(long long index, int levels, Index n) {
  ComplexVector u(n);
  for (Index i = 0; i < n; ++i) {
    const long long k = index % levels;
    index /= levels;
    u(i) = std::polar(1.0, -2 * std::numbers::pi * double(k) / levels);
  }
  return u;
}

double checked_size(double phases, double per_phase) {
  const double total = phases * per_phase;
  if (!(total <= kMaxGridEvaluations)) {
    throw Error(ErrorCode::GridTooLarge, "grid of " + std::to_string(total) + " evaluations exceeds the cap");
  }
  return total;
}

double int_pow(double base, Index e) {
  double r = 1;
  for (Index i = 0; i < e; ++i) r *= base;
  return r;
}

double top_eig(const ComplexMatrix& a) {
  if (a.rows() == 1) return std::real(a(0, 0));
  if (a.rows() == 2) {
    const double p = std::real(a(0, 0)), q = std::real(a(1, 1));
    return 0.5 * (p + q) + std::sqrt(0.25 * (p - q) * (p - q) + std::norm(a(0, 1)));
  }
  return max_eigval(HermitianMatrix::symmetrized(a));
}

ComplexVector top_vec(const ComplexMatrix& a) {
  const auto e = herm_eig(HermitianMatrix::symmetrized(a));
  return e.vectors.col(a.rows() - 1);
}

// Unit directions in C^k: (cos t1, e^{j p1} sin t1 cos t2, e^{j p2} sin t1 sin t2), etc.
std::vector<ComplexVector> direction_grid(Index k, int points) {
  std::vector<ComplexVector> out;
  if (k == 1) {
    out.push_back(ComplexVector::Ones(1));
    return out;
  }
  const int tl = std::max(points, 2);
  std::vector<double> t(tl), ph(points);
  for (int i = 0; i < tl; ++i) t[i] = 0.5 * std::numbers::pi * i / (tl - 1);
  for (int i = 0; i < points; ++i) ph[i] = 2 * std::numbers::pi * i / points;
  if (k == 2) {
    for (double a : t) {
      for (double p : ph) {
        ComplexVector c(2);
        c << std::cos(a), std::polar(std::sin(a), p);
        out.push_back(c);
      }
    }
    return out;
  }
  for (double a : t) {
    for (double b : t) {
      for (double p1 : ph) {
        for (double p2 : ph) {
          ComplexVector c(3);
          c << std::cos(a), std::polar(std::sin(a) * std::cos(b), p1), std::polar(std::sin(a) * std::sin(b), p2);
          out.push_back(c);
        }
      }
    }
  }
  return out;
}

// Orthonormal basis of span{hr, hb, he}.
ComplexMatrix span_basis(const ComplexVector& hr, const ComplexVector& hb, const ComplexVector& he) {
  ComplexMatrix q(hr.size(), 0);
  for (const ComplexVector* h : {&hr, &hb, &he}) {
    ComplexVector x = *h;
    if (q.cols() > 0) x -= q * (q.adjoint() * x);
    if (q.cols() > 0) x -= q * (q.adjoint() * x);
    if (x.norm() > 1e-10 * std::max(h->norm(), 1e-300)) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = x.normalized();
    }
  }
  return q;
}

}  // namespace

InnerSolution exact_inner_solve(const ComplexVector& hr, const ComplexVector& hb, const ComplexVector& he,
                                double kappa) {
  const Index m = hr.size();
  const ComplexMatrix f = hb * hb.adjoint() - kappa * (he * he.adjoint()) -
                          (kappa - 1) * ComplexMatrix::Identity(m, m);
  const ComplexMatrix r = hr * hr.adjoint();
  auto margin = [&](const ComplexVector& w) {
    return std::real(w.dot(f * w)) + 1e-10 * (1 + std::norm(hb.dot(w)));
  };
  const double fmax = top_eig(f);
  const double scale = 1 + hb.squaredNorm() + kappa * he.squaredNorm();
  if (fmax < -1e-12 * scale) throw Error(ErrorCode::Infeasible, "exact_inner_solve: secrecy target unattainable");

  const double r0 = hr.squaredNorm();
  if (r0 == 0) return {top_vec(f), 0.0};
  const ComplexVector mrt = hr / std::sqrt(r0);
  if (margin(mrt) >= 0) return {mrt, r0};

  // The dual phi(lam) = lambda_max(r + lam f) is convex with slope x^H f x at
  // the top eigenvector x, so bisect on the sign of that slope.
  auto slope = [&](double lam) {
    const ComplexVector x = top_vec(r + lam * f);
    return std::real(x.dot(f * x));
  };
  double lo = 0, hi = fmax > 0 ? r0 / fmax : 1.0;
  for (int i = 0; i < 200 && slope(hi) < 0; ++i) {
    lo = hi;
    hi *= 2;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0 ? lo : hi) = mid;
  }
  const ComplexVector xl = top_vec(r + lo * f);
  const ComplexVector xr = top_vec(r + hi * f);

  // Mix the two sides of the minimizer so that w^H f w = 0.
  const double a = std::real(xl.dot(f * xl)), b = std::real(xr.dot(f * xr));
  const cdouble c = xl.dot(f * xr);
  InnerSolution best{xr, margin(xr) >= 0 ? std::norm(hr.dot(xr)) : -1.0};
  if (a < 0 && b > 0) {
    const cdouble rot = std::abs(c) > 0 ? cdouble(0, 1) * std::conj(c) / std::abs(c) : cdouble(1);
    double t = std::atan(std::sqrt(-a / b));
    for (int i = 0; i < 80; ++i) {
      ComplexVector w = std::cos(t) * xl + rot * std::sin(t) * xr;
      w.normalize();
      if (margin(w) >= 0) {
        if (std::norm(hr.dot(w)) > best.gain) best = {w, std::norm(hr.dot(w))};
        break;
      }
      t = 0.5 * (t + 0.5 * std::numbers::pi);
    }
  }
  if (best.gain < 0) {
    const ComplexVector w = top_vec(f);
    best = {w, std::norm(hr.dot(w))};
  }
  return best;
}

OracleResult grid_search_joint(const ChannelSet& ch, const ScenarioConfig& cfg, const GridSpec& grid) {
  const ScaledProblem p = ScaledProblem::from(ch, cfg);
  const Index n = p.elements(), m = p.antennas();
  if (n > 3 || m > 3) throw Error(ErrorCode::InvalidInput, "grid_search_joint: requires N <= 3 and M <= 3");
  if (grid.phase_levels < 2 || grid.power_levels < 1 || grid.subspace_points < 0 || grid.subspace_points == 1) {
    throw Error(ErrorCode::InvalidInput, "grid_search_joint: grid levels must be >= 2");
  }
  const double phases = int_pow(grid.phase_levels, n);
  const bool exact = grid.subspace_points == 0;
  const Index k = std::min<Index>(3, m);
  const double dirs = exact ? 1.0 : int_pow(std::max(grid.subspace_points, 2), 2 * k - 2);
  OracleResult out;
  out.evaluations = checked_size(phases, dirs * (exact ? 1 : grid.power_levels));

  auto channels = [&](const ComplexVector& u, ComplexVector& hr, ComplexVector& hb, ComplexVector& he) {
    const ComplexVector v = augment(u);
    hr = p.Hr.adjoint() * v;
    hb = p.Hb.adjoint() * v;
    he = p.He.adjoint() * v;
  };

  std::vector<std::vector<ComplexVector>> grids(4);
  if (!exact) {
    for (Index d = 1; d <= k; ++d) grids[d] = direction_grid(d, grid.subspace_points);
  }

  // Returns the best normalized gain for the phase index and fills w.
  auto inner = [&](long long idx, ComplexVector* w_out) -> double {
    ComplexVector hr, hb, he;
    channels(phases_at(idx, grid.phase_levels, n), hr, hb, he);
    if (exact) {
      try {
        InnerSolution s = exact_inner_solve(hr, hb, he, p.kappa);
        if (w_out) *w_out = s.w;
        return s.gain;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible) throw;
        return kNone;
      }
    }
    const ComplexMatrix q = span_basis(hr, hb, he);
    const ComplexVector ar = q.adjoint() * hr, ab = q.adjoint() * hb, ae = q.adjoint() * he;
    double best = kNone;
    for (const ComplexVector& c : grids[q.cols()]) {
      const double gr = std::norm(ar.dot(c)), gb = std::norm(ab.dot(c)), ge = std::norm(ae.dot(c));
      for (int l = grid.power_levels; l >= 1; --l) {
        const double pw = double(l) / grid.power_levels;
        if (1 + pw * gb - p.kappa * (1 + pw * ge) < -1e-10 * (1 + pw * gb)) break;
        if (pw * gr > best) {
          best = pw * gr;
          if (w_out) *w_out = std::sqrt(pw) * (q * c);
        }
        break;
      }
    }
    return best;
  };

  const Best b = parallel_argmax((long long)phases, [&](long long i) { return inner(i, nullptr); });
  if (b.index < 0 || b.value == kNone) throw Error(ErrorCode::Infeasible, "grid_search_joint: no feasible point");
  ComplexVector w;
  inner(b.index, &w);
  out.u = phases_at(b.index, grid.phase_levels, n);
  out.w = p.physical(w);
  out.value = harvested_power(out.w, out.u, ch, cfg.zeta);
  return out;
}

OracleResult grid_search_phases(const ChannelSet& ch, const ComplexVector& w, const ScenarioConfig& cfg,
                                int levels) {
  const ScaledProblem p = ScaledProblem::from(ch, cfg);
  const Index n = p.elements();
  if (n > 4) throw Error(ErrorCode::InvalidInput, "grid_search_phases: requires N <= 4");
  if (levels < 2) throw Error(ErrorCode::InvalidInput, "grid_search_phases: levels must be >= 2");
  if (w.size() != p.antennas()) throw Error(ErrorCode::InvalidInput, "grid_search_phases: w dimension mismatch");
  OracleResult out;
  const double phases = int_pow(levels, n);
  out.evaluations = checked_size(phases, 1);
  const ComplexVector wn = p.normalized(w);
  const ComplexVector a = p.Hr * wn, bb = p.Hb * wn, c = p.He * wn;
  auto eval = [&](long long i) {
    const ComplexVector v = augment(phases_at(i, levels, n));
    const double gr = std::norm(v.dot(a)), gb = std::norm(v.dot(bb)), ge = std::norm(v.dot(c));
    if (1 + gb - p.kappa * (1 + ge) < -1e-10 * (1 + gb)) return kNone;
    return gr;
  };
  const Best b = parallel_argmax((long long)phases, eval);
  if (b.index < 0 || b.value == kNone) throw Error(ErrorCode::Infeasible, "grid_search_phases: no feasible point");
  out.u = phases_at(b.index, levels, n);
  out.w = w;
  out.value = harvested_power(out.w, out.u, ch, cfg.zeta);
  return out;
}

}  // namespace irs
