#include "ffmfg/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ffmfg::io {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string snapshot_csv(const State& state, const Grid1D& grid) {
  std::string out = kSnapshotHeader;
  out += '\n';
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    out += format_double(grid.center(i));
    out += ',';
    out += format_double(state.v[i]);
    out += ',';
    out += format_double(state.m[i]);
    out += '\n';
  }
  return out;
}

std::string monitor_csv_line(const diagnostics::MonitorRow& r) {
  std::string out;
  for (double x : {r.t, r.mass, r.min_m, r.min_v, r.max_z, r.max_w, r.entropy, r.dissipation_rhs,
                   r.lp_m, r.lq_v}) {
    if (!out.empty()) out += ',';
    out += format_double(x);
  }
  out += '\n';
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_cell(const std::string& cell) {
  if (cell == "nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError("not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace

CsvTable parse_numeric_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) throw IoError("ragged CSV row: " + line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ffmfg::io
