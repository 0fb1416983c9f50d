#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffmfg/core.hpp"
#include "ffmfg/diagnostics.hpp"

namespace ffmfg::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

inline constexpr const char* kSnapshotHeader = "x,v,m";
inline constexpr const char* kMonitorHeader =
    "t,mass,min_m,min_v,max_z,max_w,entropy,dissipation_rhs,lp_m,lq_v";

std::string snapshot_csv(const State& state, const Grid1D& grid);
std::string monitor_csv_line(const diagnostics::MonitorRow& row);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Rows of a CSV file with a header line; numbers parsed with from_chars.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable parse_numeric_csv(const std::string& text);

}  // namespace ffmfg::io
