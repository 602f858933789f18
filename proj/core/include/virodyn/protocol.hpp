#ifndef VIRODYN_PROTOCOL_HPP
#define VIRODYN_PROTOCOL_HPP

#include <vector>

#include "virodyn/integrator.hpp"
#include "virodyn/model.hpp"

namespace virodyn {

struct ProtocolResult {
  OutcomeReport report;
  Trajectory trajectory;
  /// Extrema of U after the final injection.
  double post_max_U;
  double post_min_U;
};

/// Runs an impulsive dosing plan and classifies the long-term outcome.
/// Schedules dosing past the horizon or below the integrator floor are
/// rejected.
ProtocolResult run_protocol(const ModelParams& p, const State& s0,
                            const InjectionSchedule& sched, double horizon,
                            const IntegratorConfig& cfg = {});

struct KappaRecord {
  double kappa;
  /// Post-injection extrema of U and maximum of V, measured over a window
  /// of 3 baseline periods after the final injection.
  double max_U;
  double min_U;
  double max_V;
  Outcome outcome;
};

struct KappaSweepResult {
  /// Phase-reference initial state: on the converged baseline cycle at a
  /// U-maximum.
  State s0;
  double baseline_period;
  double baseline_U_max;
  double baseline_U_min;
  std::vector<KappaRecord> records;
};

/// Sweeps the inter-injection interval of an n-injection protocol applied
/// from a converged limit cycle. Throws if the baseline cycle does not
/// converge.
KappaSweepResult kappa_sweep(const ModelParams& p, double D0, int n,
                             double kappa_lo, double kappa_hi, int n_kappa,
                             double horizon = 0.0,
                             const IntegratorConfig& cfg = {});

struct DoseRecord {
  double V0;
  Outcome outcome;
  State final_state;
};

/// Classifies the outcome for each initial viral load V0 on a uniform grid.
std::vector<DoseRecord> dosage_sweep(const ModelParams& p, double U0, double I0,
                                     double V0_lo, double V0_hi, int steps = 11,
                                     double horizon = 20000.0,
                                     const IntegratorConfig& cfg = {});

struct BasinPoint {
  double U0;
  double V0;
  Outcome outcome;
};

/// Outcome label over a (U0, V0) grid at fixed I0, row-major in (U0, V0).
std::vector<BasinPoint> basin_slice(const ModelParams& p,
                                    const std::vector<double>& U0_values,
                                    const std::vector<double>& V0_values,
                                    double I0, double horizon = 20000.0,
                                    const IntegratorConfig& cfg = {});

}  // namespace virodyn

#endif
