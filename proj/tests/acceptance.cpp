// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "irs/experiment.hpp"
#include "irs/oracle.hpp"
#include "irs/sca.hpp"
#include "irs/sdp.hpp"
#include "irs/sdr.hpp"

using namespace irs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig scenario(int m, int n, double r0, std::uint64_t seed) {
  ScenarioConfig c;
  c.antennas = m;
  c.elements = n;
  c.r0 = r0;
  c.seed = seed;
  return c;
}

bool usable(const SolveResult& r) { return r.status == SolveStatus::Converged || r.status == SolveStatus::MaxIters; }

// Every solver run made for criteria 1-5, kept for the feasibility audit.
struct Run {
  ScenarioConfig cfg;
  Method method;
  SolveResult result;
};

class RunCache {
 public:
  const SolveResult& get(Method m, const ScenarioConfig& cfg) {
    const auto key = std::make_tuple(int(m), cfg.antennas, cfg.elements, cfg.r0, cfg.seed);
    auto it = index_.find(key);
    if (it != index_.end()) return runs_[it->second].result;
    runs_.push_back({cfg, m, run_method(m, cfg)});
    index_[key] = runs_.size() - 1;
    return runs_.back().result;
  }
  const std::deque<Run>& runs() const { return runs_; }

 private:
  std::deque<Run> runs_;  // stable references across insertions
  std::map<std::tuple<int, int, int, double, std::uint64_t>, std::size_t> index_;
};

bool non_decreasing(const std::vector<double>& t, double rel) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[i - 1] * (1 - rel)) return false;
  }
  return true;
}

Outcome monotonicity(RunCache& cache) {
  Outcome o;
  int bad_sdr = 0, bad_sca = 0, counted = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto cfg = scenario(4, 8, 1.0, seed);
    const auto& a = cache.get(Method::Sdr, cfg);
    const auto& b = cache.get(Method::Sca, cfg);
    if (!usable(a) && !usable(b)) continue;
    ++counted;
    if (usable(a) && !non_decreasing(a.harvested_trace, 1e-8)) ++bad_sdr;
    if (usable(b) && !non_decreasing(b.harvested_trace, 1e-8)) ++bad_sca;
  }
  o.pass = bad_sdr == 0 && bad_sca == 0;
  o.detail = fmt("%d feasible instances, non-monotone traces: sdr %d, sca %d", counted, bad_sdr, bad_sca);
  return o;
}

Outcome oracle_equivalence(RunCache& cache) {
  Outcome o;
  int below_sca = 0, below_sdr = 0, bound_violations = 0, infeasible = 0, oracle_infeasible = 0;
  double worst_sca = 2, worst_sdr = 2;
  GridSpec grid;
  grid.phase_levels = 256;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto cfg = scenario(2, 2, 1.0, seed);
    const auto ch = generate_scenario(cfg);
    double ref;
    try {
      ref = grid_search_joint(ch, cfg, grid).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      ++oracle_infeasible;
      continue;
    }
    const auto& a = cache.get(Method::Sca, cfg);
    const auto& b = cache.get(Method::Sdr, cfg);
    if (!usable(a) || !usable(b)) ++infeasible;
    const double ra = usable(a) ? a.harvested_w / ref : 0.0;
    const double rb = usable(b) ? b.harvested_w / ref : 0.0;
    if (usable(a)) worst_sca = std::min(worst_sca, ra);
    if (usable(b)) worst_sdr = std::min(worst_sdr, rb);
    if (ra < 0.98) ++below_sca;
    if (rb < 0.98) ++below_sdr;
    if (usable(b)) {
      const double relax = b.relaxation_value.value_or(0);
      const double top = std::max(b.harvested_w, usable(a) ? a.harvested_w : 0.0);
      if (relax < top * (1 - 1e-8)) ++bound_violations;
    }
  }
  o.pass = below_sca == 0 && below_sdr == 0 && bound_violations == 0;
  o.detail = fmt(
      "below 98%% of grid: sca %d, sdr %d (of which reported infeasible %d, oracle infeasible %d skipped); "
      "worst ratio among solved sca %.4f sdr %.4f; relaxation below a returned solution %d",
      below_sca, below_sdr, infeasible, oracle_infeasible, worst_sca, worst_sdr, bound_violations);
  return o;
}

// Paired medians over seeds where every listed method returned a usable result.
std::vector<double> paired_medians(RunCache& cache, const std::vector<Method>& methods, int m, int n, double r0,
                                   int seeds, int* used) {
  std::vector<std::vector<double>> p(methods.size());
  *used = 0;
  for (int s = 1; s <= seeds; ++s) {
    const auto cfg = scenario(m, n, r0, std::uint64_t(s));
    bool ok = true;
    for (Method meth : methods) ok = ok && usable(cache.get(meth, cfg));
    if (!ok) continue;
    ++*used;
    for (std::size_t i = 0; i < methods.size(); ++i) p[i].push_back(cache.get(methods[i], cfg).harvested_w);
  }
  std::vector<double> med;
  for (auto& x : p) med.push_back(x.empty() ? 0.0 : median(x));
  return med;
}

Outcome irs_gain(RunCache& cache) {
  int used = 0;
  const auto med = paired_medians(cache, {Method::Sca, Method::NoIrs}, 4, 50, 1.0, 50, &used);
  Outcome o;
  o.pass = used > 0 && med[0] >= 1.5 * med[1];
  o.detail = fmt("median sca %.4e W, no_irs %.4e W, ratio %.3f over %d seeds", med[0], med[1],
                 med[1] > 0 ? med[0] / med[1] : 0.0, used);
  return o;
}

Outcome sca_close_to_sdr(RunCache& cache) {
  Outcome o;
  for (double r0 : {1.0, 2.0, 3.0}) {
    int used = 0;
    const auto med = paired_medians(cache, {Method::Sca, Method::Sdr}, 4, 16, r0, 25, &used);
    const double gap = med[1] > 0 ? std::abs(med[0] - med[1]) / med[1] : 1.0;
    if (used == 0 || gap > 0.05) o.pass = false;
    o.detail += fmt("r0=%g: sca %.4e sdr %.4e gap %.2f%% (%d seeds); ", r0, med[0], med[1], 100 * gap, used);
  }
  return o;
}

Outcome convergence_speed(RunCache& cache) {
  Outcome o;
  for (Method m : {Method::Sdr, Method::Sca}) {
    std::vector<double> iters;
    int slow = 0;
    for (std::uint64_t s = 1; s <= 50; ++s) {
      const auto& r = cache.get(m, scenario(4, 50, 1.0, s));
      if (!usable(r)) continue;
      iters.push_back(r.iters_outer);
      const auto& t = r.harvested_trace;
      const double at15 = t[std::min<std::size_t>(15, t.size() - 1)];
      if (at15 < 0.99 * t.back()) ++slow;
    }
    const double med = iters.empty() ? 1e9 : median(iters);
    if (med > 30 || slow > 0) o.pass = false;
    o.detail += fmt("%s: median outer iterations %.1f, runs below 99%% at iteration 15: %d of %zu; ", to_string(m), med,
                    slow, iters.size());
  }
  return o;
}

Outcome feasibility(const RunCache& cache) {
  Outcome o;
  int checked = 0, bad = 0;
  for (const auto& run : cache.runs()) {
    if (!usable(run.result)) continue;
    auto ch = generate_scenario(run.cfg);
    if (run.method == Method::NoIrs) ch = without_irs(ch);
    ++checked;
    const auto rep = check_feasible(run.result.w.w, run.result.u.u(), run.cfg, ch);
    if (!rep.feasible) {
      ++bad;
      if (bad <= 3) o.detail += fmt("%s seed %llu N=%d: %s; ", to_string(run.method), (unsigned long long)run.cfg.seed,
                                    run.cfg.elements, rep.violations.empty() ? "" : rep.violations[0].c_str());
    }
  }
  o.pass = bad == 0;
  o.detail += fmt("%d solutions checked, %d infeasible", checked, bad);
  return o;
}

Outcome dual_function() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto cvec = [&](int n) {
    ComplexVector x(n);
    for (int i = 0; i < n; ++i) {
      const double re = g(rng);
      x(i) = cdouble(re, g(rng));
    }
    return x;
  };
  int non_monotone = 0, residual_bad = 0, solved = 0;
  double worst_residual = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 1 + inst % 16;
    PhaseSubproblemData s;
    s.d = cvec(n);
    s.f = cvec(n);
    s.kappa = 2.0;
    // Scale spread so the grid covers the whole transition of g.
    const double mu_hi = 10 * s.d.cwiseAbs().maxCoeff() / s.f.cwiseAbs().minCoeff();
    double prev = dual_slope(s.d, s.f, 0.0);
    for (int k = 1; k < 10000; ++k) {
      const double cur = dual_slope(s.d, s.f, mu_hi * k / 9999.0);
      if (cur < prev - 1e-12 * (1 + std::abs(prev))) {
        ++non_monotone;
        break;
      }
      prev = cur;
    }
    const double g0 = dual_slope(s.d, s.f, 0.0);
    s.c2 = g0 + uni(rng) * (2 * s.f.cwiseAbs().sum() - g0);
    const auto r = bisect_mu(s, 1e-8);
    if (r.mu > 0) {
      ++solved;
      const double res = std::abs(dual_slope(s.d, s.f, r.mu) - s.c2);
      worst_residual = std::max(worst_residual, res / (1 + std::abs(s.c2)));
      if (res > 1e-8 * (1 + std::abs(s.c2))) ++residual_bad;
    }
  }
  o.pass = non_monotone == 0 && residual_bad == 0;
  o.detail = fmt("non-monotone instances %d of 100; %d bisections with mu > 0, worst scaled residual %.2e", non_monotone,
                 solved, worst_residual);
  return o;
}

Outcome sdp_validation() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  SdpOptions opt;
  opt.tol = 1e-9;
  double worst_err = 0, worst_gap = 0;
  int non_optimal = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 2 + inst % 15;
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = cdouble(g(rng), g(rng));
    }
    const auto c = HermitianMatrix::symmetrized(a);
    SdpProblem<cdouble> p;
    const int b = p.add_block(n);
    p.set_objective(b, c.matrix());
    p.add_constraint({SdpProblem<cdouble>::dense_term(b, ComplexMatrix::Identity(n, n))}, Relation::Equal, 1.0);
    const double ref = max_eigval(c);
    for (const auto& sol : {solve_sdp(p, opt), solve_sdp_embedded(p, opt)}) {
      if (sol.status != SdpStatus::Optimal) {
        ++non_optimal;
        continue;
      }
      worst_err = std::max(worst_err, std::abs(sol.objective_value - ref));
      worst_gap = std::max(worst_gap, std::abs(sol.duality_gap) / (1 + std::abs(sol.objective_value)));
    }
  }
  o.pass = non_optimal == 0 && worst_err <= 1e-6 && worst_gap <= 1e-7;
  o.detail = fmt("100 solves (complex and embedded): non-optimal %d, worst |value - lambda_max| %.2e, worst gap %.2e",
                 non_optimal, worst_err, worst_gap);
  return o;
}

Outcome complexity_ordering() {
  Outcome o;
  std::vector<ResultRow> rows;
  for (int n : {16, 32, 50}) {
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const auto cfg = scenario(4, n, 1.0, s);
      for (Method m : {Method::Sdr, Method::Sca}) {
        const auto r = run_method(m, cfg);
        if (!usable(r)) continue;
        ResultRow row;
        row.method = to_string(m);
        row.seed = s;
        row.sweep = n;
        row.variable = "N";
        row.seconds = r.wall_clock;
        row.iters = r.iters_outer;
        row.status = r.status;
        rows.push_back(row);
      }
    }
  }
  const auto summary = compare_complexity(rows, 0);
  if (summary.entries.size() != 3) {
    o.pass = false;
    o.detail = "missing matched points: " + summary.warning;
    return o;
  }
  double prev_ratio = 0;
  for (const auto& e : summary.entries) {
    if (!(e.median_sca_seconds < e.median_sdr_seconds) || !(e.ratio > prev_ratio)) o.pass = false;
    prev_ratio = e.ratio;
    o.detail += fmt("N=%d: sdr %.4fs sca %.4fs ratio %.1f; ", e.elements, e.median_sdr_seconds, e.median_sca_seconds,
                    e.ratio);
  }
  return o;
}

Outcome baseline_ordering(RunCache& cache) {
  int used = 0;
  const auto med = paired_medians(cache, {Method::Sdr, Method::Sca, Method::RandomPhase, Method::NoIrs}, 4, 50, 1.0,
                                  50, &used);
  Outcome o;
  o.pass = used > 0 && med[0] > med[2] && med[1] > med[2] && med[2] > med[3];
  o.detail = fmt("medians over %d seeds: sdr %.4e sca %.4e random_phase %.4e no_irs %.4e W", used, med[0], med[1],
                 med[2], med[3]);
  return o;
}

}  // namespace

int main() {
  RunCache cache;
  int failures = 0;
  auto report = [&](int id, const char* name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s [%d] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "AO monotonicity", [&] { return monotonicity(cache); });
  report(2, "oracle equivalence", [&] { return oracle_equivalence(cache); });
  report(3, "IRS gain over no-IRS", [&] { return irs_gain(cache); });
  report(4, "SCA close to SDR", [&] { return sca_close_to_sdr(cache); });
  report(5, "convergence speed", [&] { return convergence_speed(cache); });
  report(6, "feasibility of criteria 1-5 solutions", [&] { return feasibility(cache); });
  report(7, "monotone dual function", [] { return dual_function(); });
  report(8, "SDP solver validation", [] { return sdp_validation(); });
  report(9, "complexity ordering", [] { return complexity_ordering(); });
  report(10, "baseline ordering", [&] { return baseline_ordering(cache); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
