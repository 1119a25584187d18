#include "filippov/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "filippov/errors.hpp"

namespace filippov::io {
namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

nlohmann::ordered_json axis_json(const AxisSpec& a) {
  return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"n", a.n}};
}

AxisSpec axis_from_json(const nlohmann::json& j) {
  return {j.at("name").get<std::string>(), j.at("min").get<double>(), j.at("max").get<double>(),
          j.at("n").get<std::size_t>()};
}

template <class Grid>
void write_provenance(const Grid& grid, const char* kind, std::ostream& out) {
  nlohmann::ordered_json j;
  j["grid"] = kind;
  j["x_axis"] = axis_json(grid.x_axis);
  j["y_axis"] = axis_json(grid.y_axis);
  nlohmann::ordered_json base;
  const ModelParams params(grid.base);
  for (const auto& name : param_names()) base[name] = params.get(name);
  j["base"] = base;
  out << "# " << j.dump() << '\n';
}

template <class Grid>
CsvTable read_provenance(std::istream& in, Grid& grid, const char* kind) {
  std::string first;
  if (!std::getline(in, first) || first.rfind("# ", 0) != 0) {
    throw ParamError("grid CSV must start with a '# ' provenance line");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(first.substr(2));
    if (j.at("grid").get<std::string>() != kind) throw ParamError(std::string("expected a ") + kind + " grid");
    grid.x_axis = axis_from_json(j.at("x_axis"));
    grid.y_axis = axis_from_json(j.at("y_axis"));
    grid.base = params_from_json(j.at("base").dump()).values();
  } catch (const nlohmann::json::exception& ex) {
    throw ParamError(std::string("malformed grid provenance: ") + ex.what());
  }
  CsvTable table = parse_csv(in);
  grid.cells.resize(grid.x_axis.n * grid.y_axis.n);
  if (table.rows.size() != grid.cells.size()) throw ParamError("grid CSV cell count does not match its axes");
  return table;
}

Placement placement_from(const std::string& s) {
  for (Placement p : {Placement::Regular, Placement::Virtual, Placement::OnBoundary, Placement::NotApplicable}) {
    if (to_string(p) == s) return p;
  }
  throw ParamError("unknown placement '" + s + "'");
}

Stability stability_from(const std::string& s) {
  for (Stability v : {Stability::Stable, Stability::Unstable, Stability::Inconclusive}) {
    if (to_string(v) == s) return v;
  }
  throw ParamError("unknown stability '" + s + "'");
}

std::size_t cell_index(const std::vector<std::string>& row, std::size_t ix_col, const AxisSpec& xa,
                       const AxisSpec& ya) {
  const std::size_t ix = std::stoul(row.at(ix_col));
  const std::size_t iy = std::stoul(row.at(ix_col + 1));
  if (ix >= xa.n || iy >= ya.n) throw ParamError("grid CSV index out of range");
  return iy * xa.n + ix;
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const CsvTable& table, std::ostream& out) {
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << quote(row[i]);
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

void emit_csv(const CsvTable& table, const std::string& path) {
  if (path.empty()) {
    write_csv(table, std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(table, out);
  if (!out) throw IoError("error while writing '" + path + "'");
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      table.header = split_line(line);
      have_header = true;
    } else {
      table.rows.push_back(split_line(line));
    }
  }
  return table;
}

CsvTable equilibria_table(const std::vector<EquilibriumRecord>& records) {
  CsvTable t;
  t.header = {"mode", "x", "y", "kind", "placement", "stability", "eig1_re", "eig1_im", "eig2_re", "eig2_im"};
  for (const auto& r : records) {
    std::vector<std::string> row{std::string(to_string(r.field)),     format_number(r.location.x),
                                 format_number(r.location.y),         std::string(to_string(r.kind)),
                                 std::string(to_string(r.placement)), std::string(to_string(r.stability))};
    for (std::size_t i = 0; i < 2; ++i) {
      if (i < r.eigenvalues.size()) {
        row.push_back(format_number(r.eigenvalues[i].real()));
        row.push_back(format_number(r.eigenvalues[i].imag()));
      } else {
        row.emplace_back();
        row.emplace_back();
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable t;
  t.header = {"t", "x", "y", "regime"};
  for (const auto& seg : traj.segments) {
    for (std::size_t i = 0; i < seg.times.size(); ++i) {
      t.rows.push_back({format_number(seg.times[i]), format_number(seg.states[i].x),
                        format_number(seg.states[i].y), std::string(to_string(seg.regime))});
    }
  }
  return t;
}

void write_region_grid(const RegionGrid& grid, std::ostream& out) {
  write_provenance(grid, "region", out);
  CsvTable t;
  t.header = {grid.x_axis.name, grid.y_axis.name, "ix",          "iy",          "label",
              "undetermined",   "nh_exists",      "nh_placement", "nh_stability", "h_exists",
              "h_placement",    "h_stability",    "pseudo_exists", "pseudo_stability"};
  for (std::size_t iy = 0; iy < grid.y_axis.n; ++iy) {
    for (std::size_t ix = 0; ix < grid.x_axis.n; ++ix) {
      const RegionCode& c = grid.at(ix, iy);
      t.rows.push_back({format_number(grid.x_axis.value(ix)), format_number(grid.y_axis.value(iy)),
                        std::to_string(ix), std::to_string(iy), c.label(), flag(c.undetermined),
                        flag(c.nh_exists), std::string(to_string(c.nh_placement)),
                        std::string(to_string(c.nh_stability)), flag(c.h_exists),
                        std::string(to_string(c.h_placement)), std::string(to_string(c.h_stability)),
                        flag(c.pseudo_exists), std::string(to_string(c.pseudo_stability))});
    }
  }
  write_csv(t, out);
}

RegionGrid read_region_grid(std::istream& in) {
  RegionGrid grid;
  const CsvTable t = read_provenance(in, grid, "region");
  for (const auto& row : t.rows) {
    if (row.size() != 14) throw ParamError("region grid row must have 14 fields");
    RegionCode c;
    c.undetermined = row[5] == "1";
    c.nh_exists = row[6] == "1";
    c.nh_placement = placement_from(row[7]);
    c.nh_stability = stability_from(row[8]);
    c.h_exists = row[9] == "1";
    c.h_placement = placement_from(row[10]);
    c.h_stability = stability_from(row[11]);
    c.pseudo_exists = row[12] == "1";
    c.pseudo_stability = stability_from(row[13]);
    grid.cells[cell_index(row, 2, grid.x_axis, grid.y_axis)] = c;
  }
  return grid;
}

void write_basin_grid(const BasinGrid& grid, std::ostream& out) {
  write_provenance(grid, "basin", out);
  CsvTable t;
  t.header = {grid.x_axis.name, grid.y_axis.name, "ix", "iy", "label"};
  for (std::size_t iy = 0; iy < grid.y_axis.n; ++iy) {
    for (std::size_t ix = 0; ix < grid.x_axis.n; ++ix) {
      t.rows.push_back({format_number(grid.x_axis.value(ix)), format_number(grid.y_axis.value(iy)),
                        std::to_string(ix), std::to_string(iy), std::string(to_string(grid.at(ix, iy)))});
    }
  }
  write_csv(t, out);
}

BasinGrid read_basin_grid(std::istream& in) {
  BasinGrid grid;
  const CsvTable t = read_provenance(in, grid, "basin");
  for (const auto& row : t.rows) {
    if (row.size() != 5) throw ParamError("basin grid row must have 5 fields");
    grid.cells[cell_index(row, 2, grid.x_axis, grid.y_axis)] = basin_label_from_string(row[4]);
  }
  return grid;
}

template <class Grid>
void emit_grid(const Grid& grid, const std::string& path) {
  auto write = [&](std::ostream& out) {
    if constexpr (std::is_same_v<Grid, RegionGrid>) {
      write_region_grid(grid, out);
    } else {
      write_basin_grid(grid, out);
    }
  };
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw IoError("error while writing '" + path + "'");
}

template void emit_grid<RegionGrid>(const RegionGrid&, const std::string&);
template void emit_grid<BasinGrid>(const BasinGrid&, const std::string&);

}  // namespace filippov::io
