#include "filippov/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dopri.hpp"
#include "filippov/errors.hpp"

namespace filippov {
namespace {

using detail::Vec;

double distance(const State& a, const State& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::string format_state(double t, const State& z) {
  std::ostringstream os;
  os.precision(12);
  os << "t = " << t << ", state = (" << z.x << ", " << z.y << ")";
  return os.str();
}

// Drops candidates that sit within `radius` of an earlier, higher-priority one.
std::vector<EquilibriumRecord> merge_candidates(std::vector<EquilibriumRecord> all, double radius) {
  auto rank = [](const EquilibriumRecord& r) {
    switch (r.kind) {
      case EquilibriumKind::Interior: return 0;
      case EquilibriumKind::Boundary: return 1;
      case EquilibriumKind::Pseudo: return 2;
      default: return 3;
    }
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
  std::vector<EquilibriumRecord> kept;
  for (auto& rec : all) {
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const auto& k) { return distance(k.location, rec.location) <= radius; });
    if (!dup) kept.push_back(std::move(rec));
  }
  return kept;
}

class AttractorTracker {
 public:
  AttractorTracker(std::vector<EquilibriumRecord> candidates, double radius, double dwell)
      : candidates_(std::move(candidates)), radius_(radius), dwell_(dwell) {}

  // True once the state has stayed near one candidate for the dwell time.
  bool update(double t, const State& z) {
    std::ptrdiff_t nearest = -1;
    double best = radius_;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      const double d = distance(candidates_[i].location, z);
      if (d <= best) {
        best = d;
        nearest = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (nearest < 0) {
      current_ = -1;
      return false;
    }
    if (nearest != current_) {
      current_ = nearest;
      since_ = t;
    }
    return t - since_ >= dwell_;
  }

  const EquilibriumRecord& current() const { return candidates_.at(static_cast<std::size_t>(current_)); }

  // Time at which the dwell condition would be met, or +inf when not near a candidate.
  double deadline() const noexcept {
    return current_ < 0 ? std::numeric_limits<double>::infinity() : since_ + dwell_;
  }

 private:
  std::vector<EquilibriumRecord> candidates_;
  double radius_;
  double dwell_;
  std::ptrdiff_t current_ = -1;
  double since_ = 0.0;
};

void check_finite(const State& z, double t) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y)) {
    throw NumericalError("non-finite state encountered at " + format_state(t, z));
  }
}

// Clamps tiny negative overshoots; larger ones indicate a tolerance problem.
void clamp_nonnegative(State& z, double atol, double t) {
  for (double* c : {&z.x, &z.y}) {
    if (*c < 0.0) {
      if (*c > -atol) {
        *c = 0.0;
      } else {
        throw NumericalError("population became negative at " + format_state(t, z) +
                             "; tighten the integration tolerances");
      }
    }
  }
}

class HybridRun {
 public:
  HybridRun(const ModelParams& P, const SimOptions& opt, std::vector<EquilibriumRecord> candidates)
      : P_(P),
        opt_(opt),
        bounds_(sliding_bounds(P)),
        tracker_(merge_candidates(std::move(candidates), opt.attractor_radius), opt.attractor_radius,
                 opt.dwell) {}

  Trajectory run(State z) {
    check_finite(z, 0.0);
    if (z.x < 0.0 || z.y < 0.0) throw DomainError("initial state must be nonnegative");
    double t = 0.0;
    Regime regime = enter_from_manifold_or_region(z, t);
    open_segment(regime, t, z);
    if (tracker_.update(t, z) && finish_on_attractor()) return std::move(traj_);
    double h = opt_.initial_step;
    std::size_t steps = 0;

    while (t < opt_.t_end) {
      if (++steps > opt_.max_steps) {
        throw NumericalError("step budget exhausted at " + format_state(t, z));
      }
      const double h_try = std::min({h, opt_.max_step, opt_.t_end - t, step_to_deadline(t)});
      bool event = false;
      if (regime == Regime::Sliding) {
        event = sliding_step(t, z, h, h_try, regime);
      } else {
        event = flow_step(t, z, h, h_try, regime);
      }
      if (event) {
        if (++events_at_once_ > 1000) {
          throw NumericalError("too many manifold events without progress at " + format_state(t, z));
        }
      }
      if (tracker_.update(t, z) && finish_on_attractor()) return std::move(traj_);
    }
    traj_.segments.back().terminal = SegmentEvent::TimeLimit;
    return std::move(traj_);
  }

 private:
  double S() const { return P_.S(); }

  double step_to_deadline(double t) const {
    const double left = tracker_.deadline() - t;
    return left > 0.0 ? left : std::numeric_limits<double>::infinity();
  }

  void open_segment(Regime regime, double t, const State& z) {
    Segment seg;
    seg.regime = regime;
    seg.times.push_back(t);
    seg.states.push_back(z);
    traj_.segments.push_back(std::move(seg));
    k_valid_ = false;
  }

  void push_sample(double t, const State& z) {
    auto& seg = traj_.segments.back();
    seg.times.push_back(t);
    seg.states.push_back(z);
  }

  void switch_to(Regime regime, SegmentEvent why, double t, const State& z) {
    traj_.segments.back().terminal = why;
    open_segment(regime, t, z);
  }

  bool finish_on_attractor() {
    traj_.segments.back().terminal = SegmentEvent::AttractorReached;
    traj_.attractor = tracker_.current();
    return true;
  }

  void log(const std::string& what, double t, const State& z) {
    traj_.log.push_back(what + " at " + format_state(t, z));
  }

  // Regime for a state on (or within event_tol of) the manifold, or in a region.
  Regime enter_from_manifold_or_region(State& z, double t) {
    const double s = z.x - S();
    if (std::abs(s) > opt_.event_tol) return s < 0.0 ? Regime::FlowS1 : Regime::FlowS2;
    z.x = S();
    const auto [s1, s2] = sigma_pair(z.y, P_);
    switch (classify_manifold_point(z.y, P_)) {
      case ManifoldRegime::AttractingSliding:
        return Regime::Sliding;
      case ManifoldRegime::Crossing:
        return place(z, s1 > 0.0 ? Regime::FlowS2 : Regime::FlowS1);
      case ManifoldRegime::Tangency1:
        return place(z, Regime::FlowS1);
      case ManifoldRegime::Tangency2:
        return place(z, Regime::FlowS2);
      case ManifoldRegime::EscapingSliding:
        log("escaping sliding point (sigma1 = " + std::to_string(s1) + ", sigma2 = " + std::to_string(s2) + ")", t,
            z);
        return place(z, Regime::FlowS1);
    }
    return Regime::FlowS1;
  }

  // Moves a manifold state one event tolerance into the region of `regime`.
  Regime place(State& z, Regime regime) const {
    z.x = regime == Regime::FlowS1 ? S() - opt_.event_tol : S() + opt_.event_tol;
    if (z.x < 0.0) z.x = 0.0;
    return regime;
  }

  bool flow_step(double& t, State& z, double& h, double h_try, Regime& regime) {
    const double psi = regime == Regime::FlowS2 ? 1.0 : 0.0;
    auto rhs = [&](const Vec<2>& v) {
      const Velocity f = detail::field_unchecked(v[0], v[1], P_, psi);
      return Vec<2>{f.dx_dt, f.dy_dt};
    };
    const Vec<2> y0{z.x, z.y};
    if (!k_valid_) {
      k_ = rhs(y0);
      k_valid_ = true;
    }
    auto step = detail::dopri_step<2>(rhs, y0, k_, h_try, opt_.rtol, opt_.atol);
    if (!std::isfinite(step.error) || step.error > 1.0) {
      h = h_try * detail::step_factor(std::isfinite(step.error) ? step.error : 1e10, false);
      if (h < opt_.min_step) throw NumericalError("step size underflow at " + format_state(t, z));
      return false;
    }
    State z1{step.y[0], step.y[1]};
    check_finite(z1, t + h_try);
    clamp_nonnegative(z1, opt_.atol, t + h_try);

    const bool from_s1 = regime == Regime::FlowS1;
    const double s1 = z1.x - S();
    const bool crossed = from_s1 ? s1 >= 0.0 : s1 <= 0.0;
    if (!crossed) {
      t += h_try;
      z = z1;
      k_ = step.k_end;
      push_sample(t, z);
      h = h_try * detail::step_factor(step.error, true);
      events_at_once_ = 0;
      return false;
    }

    // bisection on the step length until |x - S| <= event_tol
    double lo = 0.0;
    double hi = h_try;
    State ze = z1;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto trial = detail::dopri_step<2>(rhs, y0, k_, mid, opt_.rtol, opt_.atol);
      const State zm{trial.y[0], trial.y[1]};
      const double sm = zm.x - S();
      if (std::abs(sm) <= opt_.event_tol) {
        ze = zm;
        hi = mid;
        break;
      }
      const bool before = from_s1 ? sm < 0.0 : sm > 0.0;
      (before ? lo : hi) = mid;
      ze = zm;
      if (hi - lo <= 1e-15 * std::max(1.0, t)) break;
    }
    t += hi;
    ze.x = S();
    check_finite(ze, t);
    clamp_nonnegative(ze, opt_.atol, t);
    z = ze;
    push_sample(t, z);
    h = std::max(hi, opt_.initial_step);
    arrive_at_manifold(t, z, regime);
    k_valid_ = false;
    return true;
  }

  void arrive_at_manifold(double t, State& z, Regime& regime) {
    const bool from_s1 = regime == Regime::FlowS1;
    const auto [s1, s2] = sigma_pair(z.y, P_);
    const ManifoldRegime mr = classify_manifold_point(z.y, P_);
    auto cross_to = [&](Regime dest) {
      State placed = z;
      place(placed, dest);
      switch_to(dest, SegmentEvent::Crossing, t, placed);
      z = placed;
      regime = dest;
    };
    auto graze = [&]() {
      log("graze", t, z);
      place(z, regime);
      push_sample(t, z);
    };
    switch (mr) {
      case ManifoldRegime::AttractingSliding:
        switch_to(Regime::Sliding, SegmentEvent::SlidingEntry, t, z);
        regime = Regime::Sliding;
        return;
      case ManifoldRegime::Crossing:
        if (from_s1 == (s1 > 0.0)) {
          cross_to(from_s1 ? Regime::FlowS2 : Regime::FlowS1);
        } else {
          graze();
        }
        return;
      case ManifoldRegime::Tangency1:
        if (from_s1) {
          graze();
        } else {
          cross_to(Regime::FlowS1);
        }
        return;
      case ManifoldRegime::Tangency2:
        if (from_s1) {
          cross_to(Regime::FlowS2);
        } else {
          graze();
        }
        return;
      case ManifoldRegime::EscapingSliding:
        log("escaping sliding point (sigma1 = " + std::to_string(s1) + ", sigma2 = " + std::to_string(s2) + ")",
            t, z);
        graze();
        return;
    }
  }

  bool sliding_step(double& t, State& z, double& h, double h_try, Regime& regime) {
    auto rhs = [&](const Vec<1>& v) { return Vec<1>{detail::sliding_flow_unchecked(v[0], P_)}; };
    const Vec<1> y0{z.y};
    if (!k_valid_) {
      k_ = {rhs(y0)[0], 0.0};
      k_valid_ = true;
    }
    const Vec<1> k1{k_[0]};
    auto step = detail::dopri_step<1>(rhs, y0, k1, h_try, opt_.rtol, opt_.atol);
    if (!std::isfinite(step.error) || step.error > 1.0) {
      h = h_try * detail::step_factor(std::isfinite(step.error) ? step.error : 1e10, false);
      if (h < opt_.min_step) throw NumericalError("step size underflow while sliding at " + format_state(t, z));
      return false;
    }
    const double y1 = step.y[0];
    check_finite({S(), y1}, t + h_try);
    const bool above = y1 > bounds_.y_upper;
    const bool below = y1 < bounds_.y_lower;
    if (!above && !below) {
      t += h_try;
      z = {S(), y1};
      k_[0] = step.k_end[0];
      push_sample(t, z);
      h = h_try * detail::step_factor(step.error, true);
      events_at_once_ = 0;
      return false;
    }

    const double bound = above ? bounds_.y_upper : bounds_.y_lower;
    double lo = 0.0;
    double hi = h_try;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double ym = detail::dopri_step<1>(rhs, y0, k1, mid, opt_.rtol, opt_.atol).y[0];
      if (std::abs(ym - bound) <= opt_.event_tol) {
        hi = mid;
        break;
      }
      const bool inside = above ? ym < bound : ym > bound;
      (inside ? lo : hi) = mid;
      if (hi - lo <= 1e-15 * std::max(1.0, t)) break;
    }
    t += hi;
    z = {S(), bound};
    push_sample(t, z);
    // leaving through the upper end continues in the non-harvest field, the lower end in the harvest field
    const Regime dest = above ? Regime::FlowS1 : Regime::FlowS2;
    State placed = z;
    place(placed, dest);
    switch_to(dest, SegmentEvent::SlidingExit, t, placed);
    z = placed;
    regime = dest;
    h = std::max(hi, opt_.initial_step);
    return true;
  }

  const ModelParams& P_;
  const SimOptions& opt_;
  SlidingBounds bounds_;
  AttractorTracker tracker_;
  Trajectory traj_;
  Vec<2> k_{};
  bool k_valid_ = false;
  int events_at_once_ = 0;
};

std::vector<EquilibriumRecord> field_candidates(const ModelParams& P, PsiMode mode) {
  auto out = semi_trivial_equilibria(P, mode);
  for (auto& rec : interior_equilibria(P, mode).equilibria) out.push_back(std::move(rec));
  return out;
}

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::FlowS1: return "FlowS1";
    case Regime::FlowS2: return "FlowS2";
    case Regime::Sliding: return "Sliding";
  }
  return "?";
}

std::string_view to_string(SegmentEvent event) noexcept {
  switch (event) {
    case SegmentEvent::Crossing: return "Crossing";
    case SegmentEvent::SlidingEntry: return "SlidingEntry";
    case SegmentEvent::SlidingExit: return "SlidingExit";
    case SegmentEvent::TimeLimit: return "TimeLimit";
    case SegmentEvent::AttractorReached: return "AttractorReached";
  }
  return "?";
}

void SimOptions::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"t_end", t_end},       {"initial_step", initial_step},   {"max_step", max_step},
      {"rtol", rtol},         {"atol", atol},                   {"event_tol", event_tol},
      {"attractor_radius", attractor_radius}, {"dwell", dwell}, {"min_step", min_step}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ParamError(std::string("simulation option '") + name + "' must be positive and finite");
    }
  }
}

const State& Trajectory::final_state() const {
  if (segments.empty() || segments.back().states.empty()) throw DomainError("empty trajectory");
  return segments.back().states.back();
}

double Trajectory::final_time() const {
  if (segments.empty() || segments.back().times.empty()) throw DomainError("empty trajectory");
  return segments.back().times.back();
}

std::size_t Trajectory::sample_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.times.size();
  return n;
}

Trajectory simulate(const State& initial, const ModelParams& params, const SimOptions& options) {
  options.validate();
  HybridRun run(params, options, filippov_equilibria(params));
  return run.run(initial);
}

Trajectory simulate_field(const State& initial, const ModelParams& P, PsiMode mode, const SimOptions& opt) {
  opt.validate();
  check_finite(initial, 0.0);
  if (initial.x < 0.0 || initial.y < 0.0) throw DomainError("initial state must be nonnegative");
  const double psi = psi_value(mode);
  auto rhs = [&](const Vec<2>& v) {
    const Velocity f = detail::field_unchecked(v[0], v[1], P, psi);
    return Vec<2>{f.dx_dt, f.dy_dt};
  };
  AttractorTracker tracker(merge_candidates(field_candidates(P, mode), opt.attractor_radius),
                           opt.attractor_radius, opt.dwell);
  Trajectory traj;
  Segment seg;
  seg.regime = mode == PsiMode::Harvest ? Regime::FlowS2 : Regime::FlowS1;
  seg.times.push_back(0.0);
  seg.states.push_back(initial);
  double t = 0.0;
  Vec<2> y{initial.x, initial.y};
  Vec<2> k = rhs(y);
  double h = opt.initial_step;
  std::size_t steps = 0;
  bool done = tracker.update(t, initial);
  while (!done && t < opt.t_end) {
    if (++steps > opt.max_steps) throw NumericalError("step budget exhausted");
    const double left = tracker.deadline() - t;
    const double h_try = std::min({h, opt.max_step, opt.t_end - t, left > 0.0 ? left : h});
    auto step = detail::dopri_step<2>(rhs, y, k, h_try, opt.rtol, opt.atol);
    if (!std::isfinite(step.error) || step.error > 1.0) {
      h = h_try * detail::step_factor(std::isfinite(step.error) ? step.error : 1e10, false);
      if (h < opt.min_step) throw NumericalError("step size underflow at " + format_state(t, {y[0], y[1]}));
      continue;
    }
    State z{step.y[0], step.y[1]};
    check_finite(z, t + h_try);
    clamp_nonnegative(z, opt.atol, t + h_try);
    t += h_try;
    y = {z.x, z.y};
    k = step.k_end;
    seg.times.push_back(t);
    seg.states.push_back(z);
    h = h_try * detail::step_factor(step.error, true);
    done = tracker.update(t, z);
  }
  seg.terminal = done ? SegmentEvent::AttractorReached : SegmentEvent::TimeLimit;
  if (done) traj.attractor = tracker.current();
  traj.segments.push_back(std::move(seg));
  return traj;
}

double lyapunov_value(const State& s, const State& eq, const ModelParams& P) {
  if (!(s.x > 0.0) || !(s.y > 0.0) || !(eq.x > 0.0) || !(eq.y > 0.0)) {
    throw DomainError("lyapunov_value requires strictly positive densities");
  }
  // u - 1 - ln(u) with u = v / v*, written to keep precision near u = 1
  auto part = [](double v, double v_star) {
    const double d = (v - v_star) / v_star;
    return v_star * (d - std::log1p(d));
  };
  return P.e() * part(s.x, eq.x) + (1.0 + P.b() * P.exposed() * eq.x) * part(s.y, eq.y);
}

std::optional<EquilibriumRecord> detect_attractor(const Trajectory& traj,
                                                  const std::vector<EquilibriumRecord>& candidates,
                                                  double radius, double dwell) {
  if (!(radius > 0.0) || !(dwell > 0.0)) throw DomainError("detect_attractor: radius and dwell must be positive");
  if (traj.sample_count() == 0) return std::nullopt;
  auto near = [&](const State& z) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (distance(candidates[i].location, z) <= radius) hits.push_back(i);
    }
    if (hits.size() > 1) {
      throw DomainError("detect_attractor: several candidates within the radius; shrink the radius");
    }
    return hits;
  };
  const auto last = near(traj.final_state());
  if (last.empty()) return std::nullopt;
  const std::size_t which = last.front();
  const double t_final = traj.final_time();
  double since = t_final;
  for (auto seg = traj.segments.rbegin(); seg != traj.segments.rend(); ++seg) {
    for (std::size_t i = seg->times.size(); i-- > 0;) {
      const auto hits = near(seg->states[i]);
      if (hits.empty() || hits.front() != which) {
        return t_final - since >= dwell ? std::optional(candidates[which]) : std::nullopt;
      }
      since = seg->times[i];
    }
  }
  return t_final - since >= dwell ? std::optional(candidates[which]) : std::nullopt;
}

double prey_bound(const ModelParams& P) noexcept { return P.k1(); }

double predator_bound(const ModelParams& P) noexcept {
  const double u = P.exposed();
  const double no_harvest = P.k2() / P.r2() * (P.r2() + P.e() * P.p() * u * P.k1() / (1.0 + P.b() * u * P.k1()));
  // gamma pairs the two harvest mortalities q1*E (prey, weighted by e) and q2*E
  const double gamma = std::min(P.prey_harvest_rate() * P.e(), P.predator_harvest_rate());
  const double harvest = (P.r1() * P.k1() * P.e() + P.r2() * P.k2()) / (4.0 * gamma);
  return std::max(no_harvest, harvest);
}

BoundReport check_bounds(const Trajectory& traj, const ModelParams& P, double burn_in, double slack) {
  BoundReport rep;
  for (const auto& seg : traj.segments) {
    for (std::size_t i = 0; i < seg.times.size(); ++i) {
      if (seg.times[i] < burn_in) continue;
      rep.max_x = std::max(rep.max_x, seg.states[i].x);
      rep.max_y = std::max(rep.max_y, seg.states[i].y);
    }
  }
  rep.within = rep.max_x <= prey_bound(P) + slack && rep.max_y <= predator_bound(P) + slack;
  return rep;
}

}  // namespace filippov
