#include "irs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "irs/csv.hpp"
#include "irs/sca.hpp"
#include "irs/sdr.hpp"
#include "irs/svg.hpp"

namespace irs {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Convergence: return "convergence";
    case Mode::SweepSr: return "sweep_sr";
    case Mode::SweepN: return "sweep_n";
    case Mode::SweepM: return "sweep_m";
    case Mode::Single: return "single";
  }
  return "single";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Sdr: return "sdr";
    case Method::Sca: return "sca";
    case Method::RandomPhase: return "random_phase";
    case Method::NoIrs: return "no_irs";
  }
  return "sdr";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Convergence, Mode::SweepSr, Mode::SweepN, Mode::SweepM, Mode::Single}) {
    if (s == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidInput, "unknown mode '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (Method m : {Method::Sdr, Method::Sca, Method::RandomPhase, Method::NoIrs}) {
    if (s == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidInput, "unknown method '" + s + "'");
}

std::vector<double> ExperimentSpec::effective_sweep() const {
  if (!sweep_values.empty() && mode != Mode::Single && mode != Mode::Convergence) return sweep_values;
  switch (mode) {
    case Mode::SweepSr: return {1, 2, 3, 4, 5, 6, 7};
    case Mode::SweepN: return {10, 20, 30, 40, 50, 60};
    case Mode::SweepM: return {4, 8};
    default: return {0};
  }
}

std::string ExperimentSpec::variable() const {
  switch (mode) {
    case Mode::SweepSr: return "r0";
    case Mode::SweepN: return "N";
    case Mode::SweepM: return "M";
    default: return "none";
  }
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw Error(ErrorCode::InvalidInput, "at least one method is required");
  if (seeds < 1) throw Error(ErrorCode::InvalidInput, "seeds must be >= 1");
  const auto sw = effective_sweep();
  for (std::size_t i = 1; i < sw.size(); ++i) {
    if (!(sw[i] > sw[i - 1])) throw Error(ErrorCode::InvalidInput, "sweep values must be strictly increasing");
  }
  for (double x : sw) {
    if ((mode == Mode::SweepN || mode == Mode::SweepM) && (x != std::floor(x) || x < 0)) {
      throw Error(ErrorCode::InvalidInput, "N and M sweep values must be nonnegative integers");
    }
  }
  base.validate();
}

double median(std::vector<double> x) {
  if (x.empty()) return 0;
  std::sort(x.begin(), x.end());
  const std::size_t h = x.size() / 2;
  return x.size() % 2 ? x[h] : 0.5 * (x[h - 1] + x[h]);
}

ScenarioConfig point_config(const ExperimentSpec& spec, double sweep, int seed_index) {
  ScenarioConfig c = spec.base;
  switch (spec.mode) {
    case Mode::SweepSr: c.r0 = sweep; break;
    case Mode::SweepN: c.elements = int(sweep); break;
    case Mode::SweepM: c.antennas = int(sweep); break;
    default: break;
  }
  c.seed = spec.base.seed + std::uint64_t(seed_index);
  return c;
}

SolveResult run_method(Method method, const ScenarioConfig& cfg) {
  // Solver randomness is split from the channel stream by method.
  std::seed_seq seq{std::uint64_t(cfg.seed), std::uint64_t(method) + 1};
  std::mt19937_64 rng(seq);
  try {
    const ChannelSet ch = generate_scenario(cfg);
    switch (method) {
      case Method::Sdr: return sdr_ao(ch, cfg, rng);
      case Method::Sca: return sca_ao(ch, cfg, rng);
      case Method::RandomPhase: {
        std::uniform_real_distribution<double> uni(0.0, 2 * std::numbers::pi);
        ComplexVector u(cfg.elements);
        for (Index i = 0; i < u.size(); ++i) u(i) = std::polar(1.0, uni(rng));
        return optimize_beamformer(ch, cfg, u);
      }
      case Method::NoIrs: {
        ScenarioConfig c0 = cfg;
        c0.elements = 0;
        return optimize_beamformer(without_irs(ch), c0, ComplexVector(0));
      }
    }
  } catch (const Error& e) {
    SolveResult r;
    r.status = SolveStatus::Failed;
    r.message = e.what();
    return r;
  }
  return {};
}

namespace {

bool ok(SolveStatus s) { return s == SolveStatus::Converged || s == SolveStatus::MaxIters; }

struct Job {
  Method method;
  double sweep;
  int seed_index;
};

void write_outputs(const ExperimentSpec& spec, const ExperimentOutput& out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + spec.out_dir + "': " + ec.message());
  const fs::path dir(spec.out_dir);
  emit_csv(out.rows, (dir / "results.csv").string());

  // Summary over successful runs per (method, sweep).
  std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> groups;
  for (const auto& r : out.rows) groups[{r.method, r.sweep}].push_back(&r);
  std::string s = "method,variable,sweep,runs,ok_runs,mean_harvested_w,median_harvested_w,mean_sr_bps_hz\n";
  std::map<std::string, Series> plot;
  for (const auto& [key, rows] : groups) {
    std::vector<double> p;
    double sr = 0;
    for (const ResultRow* r : rows) {
      if (!ok(r->status)) continue;
      p.push_back(r->harvested_w);
      sr += r->sr_bps_hz;
    }
    double mean = 0;
    for (double x : p) mean += x;
    mean = p.empty() ? 0 : mean / double(p.size());
    sr = p.empty() ? 0 : sr / double(p.size());
    s += key.first + ',' + spec.variable() + ',' + format_double(key.second) + ',' + std::to_string(rows.size()) +
         ',' + std::to_string(p.size()) + ',' + format_double(mean) + ',' + format_double(median(p)) + ',' +
         format_double(sr) + '\n';
    auto& series = plot[key.first];
    series.name = key.first;
    series.x.push_back(key.second);
    series.y.push_back(mean > 0 ? 10 * std::log10(mean) + 30 : std::nan(""));
  }
  write_text((dir / "summary.csv").string(), s);

  std::vector<Series> series;
  for (auto& [name, sr] : plot) series.push_back(sr);
  const std::string xl = spec.variable() == "r0" ? "secrecy rate target (bits/s/Hz)"
                         : spec.variable() == "N" ? "IRS elements N"
                         : spec.variable() == "M" ? "AP antennas M"
                                                  : "run";
  write_text((dir / "summary.svg").string(), line_chart_svg("Mean harvested power", xl, "power (dBm)", series));

  if (spec.mode == Mode::Convergence) {
    std::string t = "method,seed,sweep,iteration,harvested_w\n";
    std::map<std::string, std::vector<std::vector<double>>> per_method;
    for (const auto& tr : out.traces) {
      for (std::size_t i = 0; i < tr.trace.size(); ++i) {
        t += tr.method + ',' + std::to_string(tr.seed) + ',' + format_double(tr.sweep) + ',' + std::to_string(i) +
             ',' + format_double(tr.trace[i]) + '\n';
      }
      per_method[tr.method].push_back(tr.trace);
    }
    write_text((dir / "trace.csv").string(), t);
    std::vector<Series> cs;
    for (const auto& [name, traces] : per_method) {
      Series sr{name, {}, {}};
      std::size_t len = 0;
      for (const auto& x : traces) len = std::max(len, x.size());
      for (std::size_t i = 0; i < len; ++i) {
        double sum = 0;
        int cnt = 0;
        for (const auto& x : traces) {
          if (x.empty()) continue;
          sum += i < x.size() ? x[i] : x.back();  // converged runs hold their final value
          ++cnt;
        }
        sr.x.push_back(double(i));
        sr.y.push_back(cnt ? 10 * std::log10(sum / cnt) + 30 : std::nan(""));
      }
      cs.push_back(sr);
    }
    write_text((dir / "convergence.svg").string(),
               line_chart_svg("Convergence", "iteration", "harvested power (dBm)", cs));
  }

  if (spec.dump_solutions) write_text((dir / "solutions.csv").string(), format_solutions(out.solutions));

  const ComplexitySummary cx = compare_complexity(out.rows, spec.base.elements);
  if (!cx.entries.empty()) {
    std::string c = "variable,sweep,elements,matched,median_sdr_seconds,median_sca_seconds,ratio,"
                    "median_sdr_iters,median_sca_iters\n";
    for (const auto& e : cx.entries) {
      c += spec.variable() + ',' + format_double(e.sweep) + ',' + std::to_string(e.elements) + ',' +
           std::to_string(e.matched) + ',' + format_double(e.median_sdr_seconds) + ',' +
           format_double(e.median_sca_seconds) + ',' + format_double(e.ratio) + ',' +
           format_double(e.median_sdr_iters) + ',' + format_double(e.median_sca_iters) + '\n';
    }
    write_text((dir / "complexity.csv").string(), c);
  }
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  std::vector<Job> jobs;
  for (Method m : spec.methods) {
    for (double x : spec.effective_sweep()) {
      for (int i = 0; i < spec.seeds; ++i) jobs.push_back({m, x, i});
    }
  }

  ExperimentOutput out;
  out.rows.resize(jobs.size());
  out.solutions.resize(jobs.size());
  out.traces.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& j = jobs[k];
      const ScenarioConfig cfg = point_config(spec, j.sweep, j.seed_index);
      const SolveResult r = run_method(j.method, cfg);
      ResultRow row;
      row.method = to_string(j.method);
      row.seed = cfg.seed;
      row.sweep = j.sweep;
      row.variable = spec.variable();
      row.harvested_w = std::max(0.0, r.harvested_w);
      row.sr_bps_hz = r.achieved_sr;
      row.iters = r.iters_outer;
      row.seconds = spec.timing ? r.wall_clock : 0.0;
      row.status = r.status;
      out.rows[k] = row;
      out.solutions[k] = {row.method, row.seed, row.sweep, r.w.w, r.u.u()};
      out.traces[k] = {row.method, row.seed, row.sweep, r.harvested_trace};
      if (log && spec.verbose) {
        std::lock_guard<std::mutex> lock(log_mu);
        *log << row.method << " sweep=" << row.sweep << " seed=" << row.seed << " P=" << row.harvested_w
             << " W SR=" << row.sr_bps_hz << " iters=" << row.iters << " status=" << to_string(row.status)
             << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(spec.threads > 0 ? spec.threads : hw, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = out.rows[a];
    const auto& y = out.rows[b];
    return std::tie(x.method, x.sweep, x.seed) < std::tie(y.method, y.sweep, y.seed);
  });
  ExperimentOutput sorted;
  for (std::size_t i : order) {
    sorted.rows.push_back(out.rows[i]);
    sorted.solutions.push_back(std::move(out.solutions[i]));
    sorted.traces.push_back(std::move(out.traces[i]));
    sorted.all_ok = sorted.all_ok && ok(out.rows[i].status);
  }
  if (!spec.out_dir.empty()) write_outputs(spec, sorted);
  return sorted;
}

ComplexitySummary compare_complexity(const std::vector<ResultRow>& rows, int elements) {
  ComplexitySummary s;
  std::map<std::pair<double, std::uint64_t>, const ResultRow*> sdr, sca;
  for (const auto& r : rows) {
    if (r.method == "sdr") sdr[{r.sweep, r.seed}] = &r;
    if (r.method == "sca") sca[{r.sweep, r.seed}] = &r;
  }
  if (sdr.empty() || sca.empty()) {
    s.warning = "compare_complexity: both sdr and sca rows are required";
    return s;
  }
  std::map<double, std::vector<std::pair<const ResultRow*, const ResultRow*>>> by_sweep;
  for (const auto& [key, a] : sdr) {
    const auto it = sca.find(key);
    if (it != sca.end()) by_sweep[key.first].push_back({a, it->second});
  }
  for (const auto& [sweep, pairs] : by_sweep) {
    const int n = pairs.front().first->variable == "N" ? int(sweep) : elements;
    if (n == 0) continue;
    ComplexityEntry e;
    e.sweep = sweep;
    e.elements = n;
    e.matched = int(pairs.size());
    std::vector<double> ts, tc, ratio, is, ic;
    for (const auto& [a, b] : pairs) {
      ts.push_back(a->seconds);
      tc.push_back(b->seconds);
      if (b->seconds > 0) ratio.push_back(a->seconds / b->seconds);
      is.push_back(a->iters);
      ic.push_back(b->iters);
    }
    e.median_sdr_seconds = median(ts);
    e.median_sca_seconds = median(tc);
    e.ratio = median(ratio);
    e.median_sdr_iters = median(is);
    e.median_sca_iters = median(ic);
    s.entries.push_back(e);
  }
  if (s.entries.empty()) s.warning = "compare_complexity: no matched instances with N > 0";
  return s;
}

}  // namespace irs
