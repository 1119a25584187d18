#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "filippov/equilibria.hpp"
#include "filippov/errors.hpp"
#include "filippov/integrator.hpp"
#include "filippov/model.hpp"
#include "filippov/scan.hpp"
#include "filippov/sliding.hpp"

namespace py = pybind11;
using namespace filippov;

namespace {

py::dict record_dict(const EquilibriumRecord& r) {
  py::dict d;
  d["x"] = r.location.x;
  d["y"] = r.location.y;
  d["field"] = std::string(to_string(r.field));
  d["kind"] = std::string(to_string(r.kind));
  d["placement"] = std::string(to_string(r.placement));
  d["stability"] = std::string(to_string(r.stability));
  d["eigenvalues"] = r.eigenvalues;
  return d;
}

py::list records(const std::vector<EquilibriumRecord>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(record_dict(r));
  return out;
}

PsiMode mode_from(const std::string& name) {
  if (name == "NonHarvest") return PsiMode::NonHarvest;
  if (name == "Harvest") return PsiMode::Harvest;
  throw ParamError("mode must be 'NonHarvest' or 'Harvest', got '" + name + "'");
}

SimOptions sim_options(double t_end, double rtol, double atol, double radius, double dwell) {
  SimOptions o;
  o.t_end = t_end;
  o.rtol = rtol;
  o.atol = atol;
  o.attractor_radius = radius;
  o.dwell = dwell;
  o.validate();
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Filippov predator-prey system with prey refuge and threshold harvesting";

  auto base_error = py::register_exception<Error>(m, "FilippovError");
  py::register_exception<ParamError>(m, "ParamError", base_error.ptr());
  py::register_exception<DomainError>(m, "DomainError", base_error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base_error.ptr());
  py::register_exception<IoError>(m, "IoError", base_error.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](const py::dict& d) {
             for (const auto& name : param_names()) {
               if (!d.contains(name)) throw ParamError("missing parameter '" + name + "'");
             }
             // start from a valid set and replace every entry; with() rejects unknown names
             ModelParams out = preset("A1");
             for (const auto& [k, val] : d) out = out.with(py::cast<std::string>(k), py::cast<double>(val));
             return out;
           }),
           py::arg("values"))
      .def_static("preset", [](const std::string& name) { return preset(name); }, py::arg("name"))
      .def("with_", [](const ModelParams& p, const std::string& name, double value) { return p.with(name, value); },
           py::arg("name"), py::arg("value"))
      .def("get", [](const ModelParams& p, const std::string& name) { return p.get(name); }, py::arg("name"))
      .def("to_dict",
           [](const ModelParams& p) {
             py::dict d;
             for (const auto& name : param_names()) d[py::str(name)] = p.get(name);
             return d;
           })
      .def("to_json", [](const ModelParams& p) { return to_json(p); })
      .def_static("from_json", [](const std::string& text) { return params_from_json(text); })
      .def("warnings", &ModelParams::warnings)
      .def("__repr__", [](const ModelParams& p) { return "ModelParams(" + to_json(p) + ")"; });

  m.def("preset_names", &preset_names);

  m.def(
      "eval_field",
      [](double x, double y, const ModelParams& p, const std::string& mode) {
        const Velocity v = eval_field({x, y}, p, mode_from(mode));
        return py::make_tuple(v.dx_dt, v.dy_dt);
      },
      py::arg("x"), py::arg("y"), py::arg("params"), py::arg("mode"));

  m.def(
      "sliding_bounds",
      [](const ModelParams& p) {
        const SlidingBounds b = sliding_bounds(p);
        return py::make_tuple(b.y_lower, b.y_upper);
      },
      py::arg("params"));
  m.def("filippov_lambda", &filippov_lambda, py::arg("y"), py::arg("params"));
  m.def("sliding_flow", &sliding_flow, py::arg("y"), py::arg("params"));
  m.def(
      "pseudo_equilibrium",
      [](const ModelParams& p) -> py::object {
        const PseudoEquilibrium pe = pseudo_equilibrium(p);
        if (!pe.record) return py::none();
        return record_dict(*pe.record);
      },
      py::arg("params"));
  m.def(
      "pseudo_stability",
      [](const ModelParams& p) {
        const PseudoStabilityReport r = pseudo_stability(p);
        return py::make_tuple(std::string(to_string(r.verdict)), r.slope);
      },
      py::arg("params"));

  m.def(
      "interior_equilibria",
      [](const ModelParams& p, const std::string& mode) { return records(interior_equilibria(p, mode_from(mode)).equilibria); },
      py::arg("params"), py::arg("mode"));
  m.def("all_equilibria", [](const ModelParams& p) { return records(all_equilibria(p)); }, py::arg("params"));
  m.def("filippov_equilibria", [](const ModelParams& p) { return records(filippov_equilibria(p)); },
        py::arg("params"));

  m.def(
      "simulate",
      [](double x0, double y0, const ModelParams& p, double t_end, double rtol, double atol, double radius,
         double dwell) {
        const Trajectory tr = simulate({x0, y0}, p, sim_options(t_end, rtol, atol, radius, dwell));
        std::vector<double> t, x, y;
        std::vector<std::string> regime;
        for (const auto& seg : tr.segments) {
          for (std::size_t i = 0; i < seg.times.size(); ++i) {
            t.push_back(seg.times[i]);
            x.push_back(seg.states[i].x);
            y.push_back(seg.states[i].y);
            regime.emplace_back(to_string(seg.regime));
          }
        }
        py::dict d;
        d["t"] = t;
        d["x"] = x;
        d["y"] = y;
        d["regime"] = regime;
        d["attractor"] = tr.attractor ? py::object(record_dict(*tr.attractor)) : py::object(py::none());
        return d;
      },
      py::arg("x0"), py::arg("y0"), py::arg("params"), py::arg("t_end") = 500.0, py::arg("rtol") = 1e-9,
      py::arg("atol") = 1e-12, py::arg("attractor_radius") = 1e-4, py::arg("dwell") = 1.0);

  m.def(
      "existence_boundary_p",
      [](const ModelParams& p, const std::string& mode) { return existence_boundary_p(p, mode_from(mode)); },
      py::arg("params"), py::arg("mode"));
  m.def(
      "boundary_bifurcations",
      [](const ModelParams& p, double s_min, double s_max) {
        py::list out;
        for (const auto& b : locate_boundary_bifurcations(p, {s_min, s_max})) {
          py::dict d;
          d["S"] = b.S;
          d["mode"] = std::string(to_string(b.mode));
          d["y"] = b.y;
          d["type"] = b.observed_type;
          out.append(d);
        }
        return out;
      },
      py::arg("params"), py::arg("s_min"), py::arg("s_max"));
  m.def(
      "scan_sp_plane",
      [](const ModelParams& p, std::pair<double, double> s, std::pair<double, double> pr, std::size_t nx,
         std::size_t ny) {
        const RegionGrid g = scan_sp_plane(p, {s.first, s.second}, {pr.first, pr.second}, {nx, ny});
        std::vector<std::string> labels;
        for (const auto& c : g.cells) labels.push_back(c.label());
        py::dict d;
        d["nx"] = nx;
        d["ny"] = ny;
        d["labels"] = labels;
        d["both_exist_fraction"] = both_exist_fraction(g);
        return d;
      },
      py::arg("params"), py::arg("s_range"), py::arg("p_range"), py::arg("nx"), py::arg("ny"));
  m.def(
      "compute_basins",
      [](const ModelParams& p, std::pair<double, double> xr, std::pair<double, double> yr, std::size_t nx,
         std::size_t ny, double t_end) {
        SimOptions o;
        o.t_end = t_end;
        const BasinGrid g = compute_basins(p, {xr.first, xr.second}, {yr.first, yr.second}, {nx, ny}, o);
        std::vector<std::string> labels;
        for (auto c : g.cells) labels.emplace_back(to_string(c));
        return labels;
      },
      py::arg("params"), py::arg("x_range"), py::arg("y_range"), py::arg("nx"), py::arg("ny"),
      py::arg("t_end") = 500.0);
}
