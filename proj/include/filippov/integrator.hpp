#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/equilibria.hpp"

namespace filippov {

enum class Regime { FlowS1, FlowS2, Sliding };

enum class SegmentEvent { Crossing, SlidingEntry, SlidingExit, TimeLimit, AttractorReached };

std::string_view to_string(Regime regime) noexcept;
std::string_view to_string(SegmentEvent event) noexcept;

struct SimOptions {
  double t_end = 500.0;
  double initial_step = 1e-2;
  double max_step = 0.5;
  double rtol = 1e-9;
  double atol = 1e-12;
  double event_tol = 1e-10;
  double attractor_radius = 1e-4;
  double dwell = 1.0;
  double min_step = 1e-14;
  std::size_t max_steps = 5'000'000;

  /// Throws ParamError when a field is not positive or event_tol is not below 1e-9.
  void validate() const;
};

struct Segment {
  Regime regime = Regime::FlowS1;
  std::vector<double> times;
  std::vector<State> states;
  SegmentEvent terminal = SegmentEvent::TimeLimit;

  double duration() const noexcept { return times.empty() ? 0.0 : times.back() - times.front(); }
};

struct Trajectory {
  std::vector<Segment> segments;
  std::optional<EquilibriumRecord> attractor;  // set when the run ended on AttractorReached
  std::vector<std::string> log;                // grazes and other notable events

  const State& final_state() const;
  double final_time() const;
  std::size_t sample_count() const noexcept;
};

/// Event-driven integration of the Filippov system with sliding.
///
/// Smooth flow in each region uses an adaptive Dormand-Prince 5(4) pair.
/// A sign change of x - S inside a step is localized by bisection until
/// |x - S| <= event_tol. At the manifold the local regime decides:
/// crossing continues in the destination field one event tolerance past
/// the manifold, attracting sliding switches to the one-dimensional sliding
/// flow with x pinned at S, tangential grazes continue in the incoming field.
/// Sliding ends when y leaves [y_lower, y_upper], continuing in the field
/// whose tangent point was reached.
///
/// The run stops early once the state has stayed within attractor_radius of
/// one stationary point of the Filippov system for `dwell` time units.
Trajectory simulate(const State& initial, const ModelParams& params, const SimOptions& options);

/// Integrates a single smooth field, ignoring the switching manifold.
Trajectory simulate_field(const State& initial, const ModelParams& params, PsiMode mode,
                          const SimOptions& options);

/// Lyapunov function of an interior equilibrium. Throws DomainError for x <= 0 or y <= 0.
double lyapunov_value(const State& state, const State& eq, const ModelParams& params);

/// Candidate within `radius` of the trajectory tail for at least `dwell` time.
/// Throws DomainError if two candidates are within radius at the same time.
std::optional<EquilibriumRecord> detect_attractor(const Trajectory& traj,
                                                  const std::vector<EquilibriumRecord>& candidates,
                                                  double radius, double dwell);

/// Asymptotic prey bound, x <= k1.
double prey_bound(const ModelParams& params) noexcept;

/// Asymptotic predator bound with gamma = min(q1*E*e, q2*E).
double predator_bound(const ModelParams& params) noexcept;

struct BoundReport {
  double max_x = 0.0;
  double max_y = 0.0;
  bool within = true;
};

/// Largest densities reached after `burn_in` time units, against the bounds above.
BoundReport check_bounds(const Trajectory& traj, const ModelParams& params, double burn_in,
                         double slack = 1e-6);

}  // namespace filippov
