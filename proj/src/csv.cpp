#include "nlobsv/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlobsv {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns) {
  if (headers.size() != columns.size() || columns.empty()) {
    throw ConfigError("write_csv: header/column mismatch");
  }
  const std::size_t rows = columns.front()->size();
  for (const auto* c : columns) {
    if (c->size() != rows) throw ConfigError("write_csv: ragged columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < headers.size(); ++i) {
    out << (i ? "," : "") << headers[i];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out << (i ? "," : "") << format_number((*columns[i])[r]);
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::vector<std::string> headers{"t"};
  std::vector<const std::vector<double>*> cols{&traj.times};
  for (std::size_t i = 0; i < traj.names.size(); ++i) {
    headers.push_back(traj.names[i]);
    cols.push_back(&traj.channels[i]);
  }
  write_csv(path, headers, cols);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < headers.size(); ++i) {
    if (headers[i] == name) return columns[i];
  }
  throw ConfigError("csv: no such column: " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv: " + path);
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.headers.push_back(cell);
  }
  table.columns.resize(table.headers.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(row, cell, ',')) {
      if (i >= table.columns.size()) throw ConfigError("csv: ragged row in " + path);
      table.columns[i++].push_back(std::stod(cell));
    }
    if (i != table.columns.size()) throw ConfigError("csv: short row in " + path);
  }
  return table;
}

}  // namespace nlobsv
