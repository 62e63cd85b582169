#include "irs/config.hpp"

#include <charconv>
#include <sstream>

#include "irs/csv.hpp"

namespace irs {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::InvalidInput, "expected a boolean, got '" + s + "'");
}

}  // namespace

double parse_double(const std::string& s) {
  double x = 0;
  const auto t = trim(s);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::InvalidInput, "expected a number, got '" + s + "'");
  }
  return x;
}

long long parse_int(const std::string& s) {
  long long x = 0;
  const auto t = trim(s);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::InvalidInput, "expected an integer, got '" + s + "'");
  }
  return x;
}

bool apply_scenario_key(ScenarioConfig& c, const std::string& key, const std::string& v) {
  auto& so = c.solver;
  if (key == "antennas") c.antennas = int(parse_int(v));
  else if (key == "elements") c.elements = int(parse_int(v));
  else if (key == "ps_w") c.ps_w = parse_double(v);
  else if (key == "ps_dbm") c.ps_w = dbm_to_watts(parse_double(v));
  else if (key == "sigma2_w") c.sigma2_w = parse_double(v);
  else if (key == "sigma2_dbm") c.sigma2_w = dbm_to_watts(parse_double(v));
  else if (key == "zeta") c.zeta = parse_double(v);
  else if (key == "r0") c.r0 = parse_double(v);
  else if (key == "d_ap_irs") c.d_ap_irs = parse_double(v);
  else if (key == "d_ap_bob") c.d_ap_bob = parse_double(v);
  else if (key == "d_ap_ehr") c.d_ap_ehr = parse_double(v);
  else if (key == "d_ap_eve") c.d_ap_eve = parse_double(v);
  else if (key == "d_irs_bob") c.d_irs_bob = parse_double(v);
  else if (key == "d_irs_ehr") c.d_irs_ehr = parse_double(v);
  else if (key == "d_irs_eve") c.d_irs_eve = parse_double(v);
  else if (key == "alpha_direct") c.alpha_direct = parse_double(v);
  else if (key == "alpha_irs") c.alpha_irs = parse_double(v);
  else if (key == "pl_ref_db") c.pl_ref_db = parse_double(v);
  else if (key == "departure_deg") c.departure_deg = parse_double(v);
  else if (key == "arrival_deg") c.arrival_deg = parse_double(v);
  else if (key == "seed") c.seed = std::uint64_t(parse_int(v));
  else if (key == "epsilon") so.epsilon = parse_double(v);
  else if (key == "max_outer") so.max_outer = int(parse_int(v));
  else if (key == "max_inner_w") so.max_inner_w = int(parse_int(v));
  else if (key == "max_inner_u") so.max_inner_u = int(parse_int(v));
  else if (key == "inner_tol") so.inner_tol = parse_double(v);
  else if (key == "eps_bisect") so.eps_bisect = parse_double(v);
  else if (key == "randomizations") so.randomizations = int(parse_int(v));
  else if (key == "sdp_tol") so.sdp_tol = parse_double(v);
  else if (key == "phase_init") {
    if (v == "zero") so.phase_init = PhaseInit::Zero;
    else if (v == "random") so.phase_init = PhaseInit::Random;
    else throw Error(ErrorCode::InvalidInput, "phase_init must be zero or random");
  } else {
    return false;
  }
  return true;
}

ExperimentSpec parse_experiment_config(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidInput, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (apply_scenario_key(spec.base, key, val)) continue;
      if (key == "mode") {
        spec.mode = parse_mode(val);
      } else if (key == "methods") {
        spec.methods.clear();
        for (const auto& m : split_list(val)) spec.methods.push_back(parse_method(m));
      } else if (key == "sweep") {
        spec.sweep_values.clear();
        for (const auto& x : split_list(val)) spec.sweep_values.push_back(parse_double(x));
      } else if (key == "seeds") {
        spec.seeds = int(parse_int(val));
      } else if (key == "out") {
        spec.out_dir = val;
      } else if (key == "threads") {
        spec.threads = int(parse_int(val));
      } else if (key == "timing") {
        spec.timing = parse_bool(val);
      } else if (key == "dump_solutions") {
        spec.dump_solutions = parse_bool(val);
      } else {
        throw Error(ErrorCode::InvalidInput, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  return spec;
}

ExperimentSpec load_experiment_config(const std::string& path) { return parse_experiment_config(read_text(path)); }

}  // namespace irs
