#include "irs/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "irs/config.hpp"

namespace irs {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string s = kCsvHeader;
  s += '\n';
  for (const ResultRow& r : rows) {
    s += r.method + ',' + std::to_string(r.seed) + ',' + format_double(r.sweep) + ',' + r.variable + ',' +
         format_double(r.harvested_w) + ',' + format_double(r.sr_bps_hz) + ',' + std::to_string(r.iters) + ',' +
         format_double(r.seconds) + ',' + to_string(r.status) + '\n';
  }
  return s;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kCsvHeader) throw Error(ErrorCode::InvalidInput, "parse_csv: bad header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 9) throw Error(ErrorCode::InvalidInput, "parse_csv: line " + std::to_string(i + 1));
    ResultRow r;
    r.method = f[0];
    r.seed = std::uint64_t(parse_int(f[1]));
    r.sweep = parse_double(f[2]);
    r.variable = f[3];
    r.harvested_w = parse_double(f[4]);
    r.sr_bps_hz = parse_double(f[5]);
    r.iters = int(parse_int(f[6]));
    r.seconds = parse_double(f[7]);
    const auto st = parse_status(f[8]);
    if (!st) throw Error(ErrorCode::InvalidInput, "parse_csv: bad status '" + f[8] + "'");
    r.status = *st;
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, "emit_csv: no rows");
  write_text(path, format_csv(rows));
}

std::vector<ResultRow> read_csv(const std::string& path) { return parse_csv(read_text(path)); }

std::string format_solutions(const std::vector<SolutionRecord>& sols) {
  std::string s = "method,seed,sweep,vector,index,re,im\n";
  auto put = [&](const SolutionRecord& r, const char* name, const ComplexVector& x) {
    for (Index i = 0; i < x.size(); ++i) {
      s += r.method + ',' + std::to_string(r.seed) + ',' + format_double(r.sweep) + ',' + name + ',' +
           std::to_string(i) + ',' + format_double(x(i).real()) + ',' + format_double(x(i).imag()) + '\n';
    }
  };
  for (const auto& r : sols) {
    put(r, "w", r.w);
    put(r, "u", r.u);
  }
  return s;
}

std::vector<SolutionRecord> parse_solutions(const std::string& text) {
  const auto lines = lines_of(text);
  std::vector<SolutionRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 7) throw Error(ErrorCode::InvalidInput, "parse_solutions: line " + std::to_string(i + 1));
    const std::uint64_t seed = std::uint64_t(parse_int(f[1]));
    const double sweep = parse_double(f[2]);
    const long long idx = parse_int(f[4]);
    if (out.empty() || out.back().method != f[0] || out.back().seed != seed || out.back().sweep != sweep ||
        (f[3] == "w" && idx == 0)) {
      out.push_back({f[0], seed, sweep, ComplexVector(0), ComplexVector(0)});
    }
    ComplexVector& x = f[3] == "w" ? out.back().w : out.back().u;
    if (idx != x.size()) throw Error(ErrorCode::InvalidInput, "parse_solutions: index out of order");
    x.conservativeResize(idx + 1);
    x(idx) = cdouble(parse_double(f[5]), parse_double(f[6]));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace irs
