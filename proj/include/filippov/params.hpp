#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "filippov/types.hpp"

namespace filippov {

/// Raw parameter values, unvalidated.
struct ParamValues {
  double r1 = 0.0;  // prey intrinsic growth rate
  double k1 = 0.0;  // prey carrying capacity
  double m = 0.0;   // refuge fraction, 0 < m < 1
  double p = 0.0;   // maximum predation rate
  double b = 0.0;   // handling-time coefficient
  double q1 = 0.0;  // prey catchability
  double E = 0.0;   // harvesting effort
  double r2 = 0.0;  // predator intrinsic growth rate
  double k2 = 0.0;  // predator carrying capacity
  double e = 0.0;   // conversion rate
  double q2 = 0.0;  // predator catchability
  double S = 0.0;   // prey threshold that switches harvesting on

  friend bool operator==(const ParamValues&, const ParamValues&) = default;
};

/// Names of the twelve parameters in serialization order.
const std::vector<std::string>& param_names();

/**
 * Validated, immutable parameter set.
 *
 * Every field must be finite and strictly positive, except the refuge
 * fraction m which must lie in (0, 1). Construction throws ParamError
 * otherwise; all evaluation routines assume a valid instance.
 *
 * The products q1*E and q2*E act as per-capita harvest mortality rates
 * and are used jointly; no unit algebra is enforced on q_i and E.
 */
class ModelParams {
 public:
  explicit ModelParams(const ParamValues& values);

  const ParamValues& values() const noexcept { return v_; }

  double r1() const noexcept { return v_.r1; }
  double k1() const noexcept { return v_.k1; }
  double m() const noexcept { return v_.m; }
  double p() const noexcept { return v_.p; }
  double b() const noexcept { return v_.b; }
  double q1() const noexcept { return v_.q1; }
  double E() const noexcept { return v_.E; }
  double r2() const noexcept { return v_.r2; }
  double k2() const noexcept { return v_.k2; }
  double e() const noexcept { return v_.e; }
  double q2() const noexcept { return v_.q2; }
  double S() const noexcept { return v_.S; }

  /// Fraction of prey exposed to predation, 1 - m.
  double exposed() const noexcept { return 1.0 - v_.m; }
  double prey_harvest_rate() const noexcept { return v_.q1 * v_.E; }
  double predator_harvest_rate() const noexcept { return v_.q2 * v_.E; }

  /// Copy with one named parameter replaced (validated).
  ModelParams with(std::string_view name, double value) const;
  ModelParams with_S(double s) const { return with("S", s); }
  ModelParams with_p(double p) const { return with("p", p); }
  ModelParams with_m(double m) const { return with("m", m); }

  double get(std::string_view name) const;

  /// Non-fatal issues, e.g. S >= k1 leaves no sliding segment.
  std::vector<std::string> warnings() const;

 private:
  ParamValues v_;
};

/// Built-in parameter sets "A1" and "A2"; throws ParamError for unknown names.
ModelParams preset(std::string_view name);
const std::vector<std::string>& preset_names();

std::string to_json(const ModelParams& params);
/// Parses a flat JSON object with exactly the twelve parameter keys.
ModelParams params_from_json(std::string_view text);

}  // namespace filippov
