#pragma once

#include <string>
#include <vector>

#include "irs/experiment.hpp"

namespace irs {

inline constexpr const char* kCsvHeader = "method,seed,sweep,variable,harvested_w,sr_bps_hz,iters,seconds,status";

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text);  // throws InvalidInput

/// Throws InvalidInput on empty rows and IoError on write failure.
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

/// method,seed,sweep,vector,index,re,im
std::string format_solutions(const std::vector<SolutionRecord>& sols);
std::vector<SolutionRecord> parse_solutions(const std::string& text);

void write_text(const std::string& path, const std::string& text);  // throws IoError
std::string read_text(const std::string& path);                     // throws IoError

}  // namespace irs
