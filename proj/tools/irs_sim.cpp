// Batch runner: irs_sim run --config <file> --mode <mode> --out <dir> [--seeds K] [--dump-solutions] [--verbose]

#include <iostream>

#include <CLI11.hpp>

#include "irs/config.hpp"
#include "irs/csv.hpp"
#include "irs/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted secure SWIPT beamforming experiments"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "run an experiment batch");

  std::string config, mode, out;
  int seeds = 0, threads = 0;
  bool dump = false, verbose = false, no_timing = false;
  run->add_option("--config", config, "key = value configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "convergence | sweep_sr | sweep_n | sweep_m | single")->required();
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--seeds", seeds, "seeds per sweep point")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run->add_flag("--dump-solutions", dump, "write solutions.csv with every (w, u)");
  run->add_flag("--verbose", verbose, "log every run to stderr");
  run->add_flag("--no-timing", no_timing, "write 0 in the seconds column");

  CLI11_PARSE(app, argc, argv);

  try {
    irs::ExperimentSpec spec = irs::load_experiment_config(config);
    spec.mode = irs::parse_mode(mode);
    spec.out_dir = out;
    if (seeds > 0) spec.seeds = seeds;
    if (threads > 0) spec.threads = threads;
    spec.dump_solutions = spec.dump_solutions || dump;
    spec.verbose = verbose;
    if (no_timing) spec.timing = false;

    const irs::ExperimentOutput res = irs::run_experiment(spec, &std::cerr);
    std::size_t bad = 0;
    for (const auto& r : res.rows) {
      if (r.status != irs::SolveStatus::Converged && r.status != irs::SolveStatus::MaxIters) ++bad;
    }
    std::cout << res.rows.size() << " runs written to " << out << "/results.csv";
    if (bad) std::cout << ", " << bad << " ended infeasible or failed";
    std::cout << '\n';
    return res.all_ok ? 0 : 1;
  } catch (const irs::Error& e) {
    std::cerr << "error (" << irs::to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  }
}
