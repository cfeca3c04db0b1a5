#pragma once

// CSV output: header row, 17 significant digits, '.' decimal point, ','
// separator, '\n' line endings (bit-stable for golden comparisons).

#include <string>
#include <vector>

#include "nlobsv/ode.hpp"

namespace nlobsv {

std::string format_number(double v);

/// Columns must share one length.
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<const std::vector<double>*>& columns);

/// Writes t plus every trajectory channel.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace nlobsv
