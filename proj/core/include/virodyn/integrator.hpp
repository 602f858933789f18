#ifndef VIRODYN_INTEGRATOR_HPP
#define VIRODYN_INTEGRATOR_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "virodyn/model.hpp"

namespace virodyn {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  /// Deliberately far below any state magnitude of interest: the
  /// square-wave regime swings through genuine minima around 1e-139, and a
  /// conventional absolute tolerance would let those components step
  /// through zero. Error control is therefore effectively relative all the
  /// way down to the absorbing threshold.
  double abs_tol = 1e-160;
  double max_step = 10.0;
  /// Components below this value are clamped to 0 after every accepted
  /// step. 0 means "clamp negatives only": the square-wave regime visits
  /// genuine minima far below any reasonable positive floor, so a positive
  /// default would destroy it.
  double floor = 0.0;
  /// Once U + I + V falls below this, the state snaps to (0,0,0) and the
  /// origin is absorbing. Chosen near the subnormal range so that even the
  /// deepest oscillatory minima stay dynamical.
  double absorb_total = 1e-148;

  void validate() const;
};

/// Impulsive dosing plan: n injections of D0/n each at times
/// t0 + (i-1)*kappa, i = 1..n.
struct InjectionSchedule {
  double D0 = 0.0;
  int n = 1;
  double kappa = 0.0;
  double t0 = 0.0;

  void validate() const;
  double dose_per_injection() const { return D0 / n; }
  std::vector<double> times() const;
};

struct InjectionEvent {
  double t;
  double dose;
  double V_pre;
  double V_post;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<InjectionEvent> events;
  /// True when the state was captured by the absorbing origin.
  bool absorbed = false;
  double absorbed_time = 0.0;

  const State& back() const { return states.back(); }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
  double time;
};

enum class Outcome { Eradication, Coexistence, LimitCycle, FailedTreatment, Undetermined };

const char* to_string(Outcome o);

struct CycleStats {
  double U_max;
  double U_min;
  double period;
};

struct OutcomeReport {
  Outcome outcome = Outcome::Undetermined;
  State final_state;
  double max_U = 0.0;
  double min_U = 0.0;
  std::optional<CycleStats> cycle;
};

/// A local maximum of one trajectory component, refined by parabolic
/// interpolation through the three bracketing samples.
struct Peak {
  double t;
  double value;
};

/// Dormand-Prince 5(4) adaptive integration of the model, with impulses
/// applied exactly at their scheduled times. Axis states (any component 0)
/// are integrated with the vector field's continuous limits, so runs may
/// start from, pass through, or stay on the boundary. Throws
/// IntegrationError on step-size underflow.
Trajectory integrate(const ModelParams& p, const State& s0, double t_end,
                     const IntegratorConfig& cfg = {},
                     const InjectionSchedule* schedule = nullptr);

/// Local maxima of the sampled series, ignoring oscillations smaller than
/// eps (hysteresis: a new extremum must exceed the previous one by eps).
std::vector<Peak> find_peaks(const std::vector<double>& times,
                             const std::vector<double>& values, double eps);

/// Classifies the asymptotic regime of an already-computed trajectory.
OutcomeReport classify_trajectory(const ModelParams& p, const Trajectory& traj,
                                  double horizon);

/// integrate + classify_trajectory.
OutcomeReport integrate_to_outcome(const ModelParams& p, const State& s0,
                                   const IntegratorConfig& cfg, double horizon,
                                   const InjectionSchedule* schedule = nullptr,
                                   Trajectory* traj_out = nullptr);

}  // namespace virodyn

#endif
