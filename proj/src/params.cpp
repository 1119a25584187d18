#include "filippov/params.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "filippov/errors.hpp"

namespace filippov {
namespace {

double* field_ptr(ParamValues& v, std::string_view name) {
  if (name == "r1") return &v.r1;
  if (name == "k1") return &v.k1;
  if (name == "m") return &v.m;
  if (name == "p") return &v.p;
  if (name == "b") return &v.b;
  if (name == "q1") return &v.q1;
  if (name == "E") return &v.E;
  if (name == "r2") return &v.r2;
  if (name == "k2") return &v.k2;
  if (name == "e") return &v.e;
  if (name == "q2") return &v.q2;
  if (name == "S") return &v.S;
  return nullptr;
}

void validate(const ParamValues& v) {
  ParamValues copy = v;
  for (const auto& name : param_names()) {
    const double value = *field_ptr(copy, name);
    if (!std::isfinite(value)) throw ParamError("parameter '" + name + "' must be finite");
    if (name == "m") {
      if (!(value > 0.0 && value < 1.0)) {
        std::ostringstream msg;
        msg << "parameter 'm' must lie in (0, 1), got " << value;
        throw ParamError(msg.str());
      }
    } else if (!(value > 0.0)) {
      std::ostringstream msg;
      msg << "parameter '" << name << "' must be strictly positive, got " << value;
      throw ParamError(msg.str());
    }
  }
}

}  // namespace

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names{"r1", "k1", "m",  "p",  "b",  "q1",
                                              "E",  "r2", "k2", "e", "q2", "S"};
  return names;
}

ModelParams::ModelParams(const ParamValues& values) : v_(values) { validate(v_); }

ModelParams ModelParams::with(std::string_view name, double value) const {
  ParamValues copy = v_;
  double* slot = field_ptr(copy, name);
  if (slot == nullptr) throw ParamError("unknown parameter '" + std::string(name) + "'");
  *slot = value;
  return ModelParams(copy);
}

double ModelParams::get(std::string_view name) const {
  ParamValues copy = v_;
  const double* slot = field_ptr(copy, name);
  if (slot == nullptr) throw ParamError("unknown parameter '" + std::string(name) + "'");
  return *slot;
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (v_.S >= v_.k1) {
    out.emplace_back("threshold S >= k1: the sliding segment is empty");
  }
  return out;
}

ModelParams preset(std::string_view name) {
  if (name == "A1") {
    return ModelParams(ParamValues{.r1 = 0.9, .k1 = 2.0, .m = 0.2, .p = 0.6, .b = 0.4, .q1 = 0.2,
                                   .E = 1.0, .r2 = 0.8, .k2 = 1.5, .e = 0.6, .q2 = 0.1, .S = 0.25});
  }
  if (name == "A2") {
    return ModelParams(ParamValues{.r1 = 2.3, .k1 = 9.0, .m = 0.15, .p = 0.2, .b = 0.04, .q1 = 0.1,
                                   .E = 1.0, .r2 = 1.2, .k2 = 7.0, .e = 0.5, .q2 = 0.2, .S = 4.0});
  }
  throw ParamError("unknown preset '" + std::string(name) + "' (known: A1, A2)");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"A1", "A2"};
  return names;
}

std::string to_json(const ModelParams& params) {
  nlohmann::ordered_json j;
  for (const auto& name : param_names()) j[name] = params.get(name);
  return j.dump();
}

ModelParams params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParamError(std::string("invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParamError("parameter file must contain a JSON object");
  ParamValues v;
  for (auto it = j.begin(); it != j.end(); ++it) {
    double* slot = field_ptr(v, it.key());
    if (slot == nullptr) throw ParamError("unknown key '" + it.key() + "'");
    if (!it.value().is_number()) throw ParamError("key '" + it.key() + "' must be a number");
    *slot = it.value().get<double>();
  }
  for (const auto& name : param_names()) {
    if (!j.contains(name)) throw ParamError("missing key '" + name + "'");
  }
  return ModelParams(v);
}

}  // namespace filippov
