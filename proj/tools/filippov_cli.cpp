#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "filippov/equilibria.hpp"
#include "filippov/errors.hpp"
#include "filippov/integrator.hpp"
#include "filippov/io/config.hpp"
#include "filippov/io/csv.hpp"
#include "filippov/io/svg.hpp"
#include "filippov/scan.hpp"
#include "filippov/sliding.hpp"

namespace {

using namespace filippov;
using io::format_number;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct SimFlags {
  double t_end = 500.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  double event_tol = 1e-10;
  double max_step = 0.5;
  double radius = 1e-4;
  double dwell = 1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--t-end", t_end, "Integration horizon")->capture_default_str();
    cmd->add_option("--rtol", rtol, "Relative tolerance")->capture_default_str();
    cmd->add_option("--atol", atol, "Absolute tolerance")->capture_default_str();
    cmd->add_option("--event-tol", event_tol, "Manifold crossing tolerance")->capture_default_str();
    cmd->add_option("--max-step", max_step, "Largest step size")->capture_default_str();
    cmd->add_option("--radius", radius, "Attractor detection radius")->capture_default_str();
    cmd->add_option("--dwell", dwell, "Time spent within the radius before stopping")->capture_default_str();
  }

  SimOptions options() const {
    SimOptions o;
    o.t_end = t_end;
    o.rtol = rtol;
    o.atol = atol;
    o.event_tol = event_tol;
    o.max_step = max_step;
    o.attractor_radius = radius;
    o.dwell = dwell;
    o.validate();
    return o;
  }
};

Range to_range(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw ParamError(std::string(flag) + " takes two values: min max");
  return {v[0], v[1]};
}

std::vector<std::string> sliding_row(const ModelParams& P) {
  const SlidingBounds sb = sliding_bounds(P);
  std::vector<std::string> row{format_number(P.S()), format_number(sb.y_lower), format_number(sb.y_upper)};
  std::optional<PseudoEquilibrium> pe;
  try {
    pe = pseudo_equilibrium(P);
  } catch (const NumericalError&) {
  }
  if (pe && pe->exists()) {
    const PseudoStabilityReport rep = pseudo_stability(P);
    row.insert(row.end(), {format_number(pe->y_candidate), "1", format_number(rep.slope),
                           std::string(to_string(rep.verdict))});
  } else {
    row.insert(row.end(), {pe ? format_number(pe->y_candidate) : std::string(), "0", "", ""});
  }
  return row;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filippov predator-prey toolkit with threshold harvesting and sliding modes"};
  app.require_subcommand(1);
  app.fallthrough();

  io::ConfigFlags flags;
  std::uint64_t seed = 0;
  app.add_option("--preset", flags.preset, "Named parameter set (A1, A2)");
  app.add_option("--params", flags.params_file, "JSON parameter file");
  app.add_option("--set", flags.overrides, "Override one parameter, key=value (repeatable)");
  app.add_option("--out", flags.out_path, "CSV output path (stdout when omitted)");
  app.add_option("--svg", flags.svg_path, "SVG figure output path");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized drivers");

  auto* eq_cmd = app.add_subcommand("equilibria", "Equilibria of both fields with placement and stability");

  auto* sl_cmd = app.add_subcommand("sliding", "Sliding segment and pseudo-equilibrium");
  std::vector<double> sl_s_range;
  std::size_t sl_samples = 0;
  sl_cmd->add_option("--s-range", sl_s_range, "Tabulate over S in [min, max]")->expected(2);
  sl_cmd->add_option("--samples", sl_samples, "Number of S samples for --s-range");

  auto* sim_cmd = app.add_subcommand("simulate", "Integrate the hybrid system");
  std::vector<double> init{};
  std::size_t random_starts = 0;
  SimFlags sim_flags;
  sim_cmd->add_option("--init", init, "Initial state x y")->expected(2);
  sim_cmd->add_option("--random-starts", random_starts, "Summarize runs from N random initial states");
  sim_flags.add_to(sim_cmd);

  auto* scan_cmd = app.add_subcommand("scan-sp", "Equilibrium regions over the (S, p) plane");
  std::vector<double> s_range{0.01, 2.0}, p_range{0.05, 2.0};
  std::size_t nx = 200, ny = 200;
  for (auto* cmd : {scan_cmd}) {
    cmd->add_option("--s-range", s_range, "S range")->expected(2)->capture_default_str();
    cmd->add_option("--p-range", p_range, "p range")->expected(2)->capture_default_str();
    cmd->add_option("--nx", nx, "Cells along S")->capture_default_str();
    cmd->add_option("--ny", ny, "Cells along p")->capture_default_str();
  }

  auto* sweep_cmd = app.add_subcommand("sweep-m", "Repeat the (S, p) scan for several refuge values");
  std::vector<double> m_values{0.4, 0.8, 0.9};
  std::string grid_prefix;
  sweep_cmd->add_option("--m", m_values, "Refuge values")->capture_default_str();
  sweep_cmd->add_option("--s-range", s_range, "S range")->expected(2)->capture_default_str();
  sweep_cmd->add_option("--p-range", p_range, "p range")->expected(2)->capture_default_str();
  sweep_cmd->add_option("--nx", nx, "Cells along S")->capture_default_str();
  sweep_cmd->add_option("--ny", ny, "Cells along p")->capture_default_str();
  sweep_cmd->add_option("--grid-prefix", grid_prefix, "Also write each region grid to <prefix>_m<value>.csv");

  auto* basin_cmd = app.add_subcommand("basins", "Basins of attraction on a grid of initial states");
  std::vector<double> bx_range, by_range;
  std::size_t bnx = 400, bny = 400;
  SimFlags basin_sim;
  basin_cmd->add_option("--x-range", bx_range, "Prey range (default 0 to k1)")->expected(2);
  basin_cmd->add_option("--y-range", by_range, "Predator range (default 0 to 1.2 k2)")->expected(2);
  basin_cmd->add_option("--nx", bnx, "Cells along x")->capture_default_str();
  basin_cmd->add_option("--ny", bny, "Cells along y")->capture_default_str();
  basin_sim.add_to(basin_cmd);

  auto* bif_cmd = app.add_subcommand("bifurcations", "Boundary equilibrium bifurcations in S");
  std::vector<double> bif_s_range;
  bool existence = false;
  bif_cmd->add_option("--s-range", bif_s_range, "S range (default 0 to k1)")->expected(2);
  bif_cmd->add_flag("--existence", existence, "Report existence-boundary p values instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (seed_opt->count() > 0) flags.seed = seed;
    const io::RunConfig cfg = io::load_config(flags);
    const ModelParams& P = cfg.params;
    print_warnings(P.warnings());

    if (eq_cmd->parsed()) {
      io::emit_csv(io::equilibria_table(all_equilibria(P)), cfg.out_path);
      if (!cfg.svg_path.empty()) io::emit_svg(io::phase_portrait(Trajectory{}, P), cfg.svg_path);
    } else if (sl_cmd->parsed()) {
      io::CsvTable t;
      t.header = {"S", "y_lower", "y_upper", "y_pseudo", "exists", "phi_prime", "stability"};
      if (sl_s_range.empty()) {
        t.rows.push_back(sliding_row(P));
      } else {
        const Range r = to_range(sl_s_range, "--s-range");
        if (sl_samples < 2) throw ParamError("--samples must be at least 2 with --s-range");
        for (std::size_t i = 0; i < sl_samples; ++i) {
          const double S = r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(sl_samples - 1);
          t.rows.push_back(sliding_row(P.with_S(S)));
        }
      }
      io::emit_csv(t, cfg.out_path);
    } else if (sim_cmd->parsed()) {
      const SimOptions opts = sim_flags.options();
      if (random_starts > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> ux(0.01, P.k1());
        std::uniform_real_distribution<double> uy(0.01, 1.2 * P.k2());
        io::CsvTable t;
        t.header = {"x0", "y0", "t_final", "x_final", "y_final", "attractor"};
        for (std::size_t i = 0; i < random_starts; ++i) {
          const State s0{ux(rng), uy(rng)};
          const Trajectory tr = simulate(s0, P, opts);
          std::string label = "none";
          if (tr.attractor) {
            label = std::string(to_string(tr.attractor->kind)) + ":" + std::string(to_string(tr.attractor->field));
          }
          t.rows.push_back({format_number(s0.x), format_number(s0.y), format_number(tr.final_time()),
                            format_number(tr.final_state().x), format_number(tr.final_state().y), label});
        }
        io::emit_csv(t, cfg.out_path);
      } else {
        if (init.size() != 2) throw ParamError("simulate needs --init x y or --random-starts N");
        const Trajectory tr = simulate({init[0], init[1]}, P, opts);
        for (const auto& line : tr.log) std::cerr << "event: " << line << '\n';
        if (tr.attractor) {
          std::cerr << "attractor: " << to_string(tr.attractor->kind) << " (" << format_number(tr.attractor->location.x)
                    << ", " << format_number(tr.attractor->location.y) << ")\n";
        }
        io::emit_csv(io::trajectory_table(tr), cfg.out_path);
        if (!cfg.svg_path.empty()) io::emit_svg(io::phase_portrait(tr, P), cfg.svg_path);
      }
    } else if (scan_cmd->parsed()) {
      const RegionGrid grid =
          scan_sp_plane(P, to_range(s_range, "--s-range"), to_range(p_range, "--p-range"), {nx, ny});
      print_warnings(grid.warnings);
      io::emit_grid(grid, cfg.out_path);
      if (!cfg.svg_path.empty()) io::emit_svg(io::region_heatmap(grid), cfg.svg_path);
    } else if (sweep_cmd->parsed()) {
      const auto entries =
          scan_m_sweep(P, m_values, to_range(s_range, "--s-range"), to_range(p_range, "--p-range"), {nx, ny});
      io::CsvTable t;
      t.header = {"m", "both_exist_fraction", "p_boundary_nonharvest", "p_boundary_harvest"};
      for (const auto& e : entries) {
        const ModelParams Pm = P.with_m(e.m);
        t.rows.push_back({format_number(e.m), format_number(e.both_exist_fraction),
                          format_number(existence_boundary_p(Pm, PsiMode::NonHarvest)),
                          format_number(existence_boundary_p(Pm, PsiMode::Harvest))});
        const std::string suffix = "_m" + format_number(e.m);
        if (!grid_prefix.empty()) io::emit_grid(e.grid, grid_prefix + suffix + ".csv");
        if (!cfg.svg_path.empty()) io::emit_svg(io::region_heatmap(e.grid), with_suffix(cfg.svg_path, suffix));
        print_warnings(e.grid.warnings);
      }
      io::emit_csv(t, cfg.out_path);
    } else if (basin_cmd->parsed()) {
      const Range xr = bx_range.empty() ? Range{0.0, P.k1()} : to_range(bx_range, "--x-range");
      const Range yr = by_range.empty() ? Range{0.0, 1.2 * P.k2()} : to_range(by_range, "--y-range");
      const BasinGrid grid = compute_basins(P, xr, yr, {bnx, bny}, basin_sim.options());
      print_warnings(grid.warnings);
      io::emit_grid(grid, cfg.out_path);
      if (!cfg.svg_path.empty()) io::emit_svg(io::basin_heatmap(grid, P), cfg.svg_path);
    } else if (bif_cmd->parsed()) {
      io::CsvTable t;
      if (existence) {
        t.header = {"mode", "p_boundary"};
        for (PsiMode mode : {PsiMode::NonHarvest, PsiMode::Harvest}) {
          t.rows.push_back({std::string(to_string(field_of(mode))), format_number(existence_boundary_p(P, mode))});
        }
      } else {
        const Range r = bif_s_range.empty() ? Range{1e-6 * P.k1(), P.k1()} : to_range(bif_s_range, "--s-range");
        t.header = {"S", "mode", "y", "type", "eig1_re", "eig1_im", "eig2_re", "eig2_im"};
        for (const auto& b : locate_boundary_bifurcations(P, r)) {
          t.rows.push_back({format_number(b.S), std::string(to_string(field_of(b.mode))), format_number(b.y),
                            b.observed_type, format_number(b.eigenvalues[0].real()),
                            format_number(b.eigenvalues[0].imag()), format_number(b.eigenvalues[1].real()),
                            format_number(b.eigenvalues[1].imag())});
        }
      }
      io::emit_csv(t, cfg.out_path);
    }
  } catch (const ParamError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
