#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "filippov/integrator.hpp"
#include "filippov/scan.hpp"

namespace filippov::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Twelve significant digits, '.' decimal separator, "nan"/"inf" never produced for finite input.
std::string format_number(double v);

void write_csv(const CsvTable& table, std::ostream& out);
/// Writes to `path`, or to stdout when path is empty. Throws IoError with the path on failure.
void emit_csv(const CsvTable& table, const std::string& path);

CsvTable parse_csv(std::istream& in);

CsvTable equilibria_table(const std::vector<EquilibriumRecord>& records);
CsvTable trajectory_table(const Trajectory& traj);

// Grid files start with one '#' provenance line (axes and base parameters as
// JSON) followed by the header row; reading them back reproduces the grid.
void write_region_grid(const RegionGrid& grid, std::ostream& out);
RegionGrid read_region_grid(std::istream& in);
void write_basin_grid(const BasinGrid& grid, std::ostream& out);
BasinGrid read_basin_grid(std::istream& in);

template <class Grid>
void emit_grid(const Grid& grid, const std::string& path);

}  // namespace filippov::io
