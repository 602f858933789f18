#include "virodyn/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace virodyn {

ProtocolResult run_protocol(const ModelParams& p, const State& s0,
                            const InjectionSchedule& sched, double horizon,
                            const IntegratorConfig& cfg) {
  sched.validate();
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const auto times = sched.times();
  if (!times.empty() && times.back() > horizon) {
    throw std::invalid_argument("injection scheduled past the horizon");
  }
  if (sched.D0 > 0.0 && sched.dose_per_injection() < cfg.floor) {
    throw std::invalid_argument("per-injection dose below the integrator floor");
  }

  ProtocolResult res;
  res.report = integrate_to_outcome(p, s0, cfg, horizon, &sched, &res.trajectory);

  const double t_last = times.empty() ? 0.0 : times.back();
  res.post_max_U = -std::numeric_limits<double>::infinity();
  res.post_min_U = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.trajectory.times.size(); ++i) {
    if (res.trajectory.times[i] < t_last) continue;
    res.post_max_U = std::max(res.post_max_U, res.trajectory.states[i].U);
    res.post_min_U = std::min(res.post_min_U, res.trajectory.states[i].U);
  }
  return res;
}

KappaSweepResult kappa_sweep(const ModelParams& p, double D0, int n,
                             double kappa_lo, double kappa_hi, int n_kappa,
                             double horizon, const IntegratorConfig& cfg) {
  if (n_kappa < 2) throw std::invalid_argument("need at least two kappa values");
  if (!(kappa_lo > 0.0) || !(kappa_hi > kappa_lo)) {
    throw std::invalid_argument("invalid kappa range");
  }

  // Converge the baseline cycle and take the state at a late U-maximum as
  // the phase reference, so kappa is comparable across runs.
  const State start{0.5 * p.K, 0.1 * p.K, 0.1 * p.K};
  const double settle = 20000.0;
  Trajectory base;
  const OutcomeReport base_rep =
      integrate_to_outcome(p, start, cfg, settle, nullptr, &base);
  if (base_rep.outcome != Outcome::LimitCycle || !base_rep.cycle) {
    throw std::runtime_error("baseline limit cycle did not converge");
  }

  std::vector<double> Us(base.states.size());
  for (std::size_t i = 0; i < base.states.size(); ++i) Us[i] = base.states[i].U;
  const auto peaks = find_peaks(base.times, Us, 1e-4 * p.K);
  if (peaks.empty()) throw std::runtime_error("no baseline peaks found");
  const double t_peak = peaks.back().t;
  std::size_t idx = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < base.times.size(); ++i) {
    const double d = std::abs(base.times[i] - t_peak);
    if (d < best) {
      best = d;
      idx = i;
    }
  }

  KappaSweepResult sweep;
  sweep.s0 = base.states[idx];
  sweep.baseline_period = base_rep.cycle->period;
  sweep.baseline_U_max = base_rep.cycle->U_max;
  sweep.baseline_U_min = base_rep.cycle->U_min;

  const double T = sweep.baseline_period;
  for (int k = 0; k < n_kappa; ++k) {
    const double kappa = kappa_lo + (kappa_hi - kappa_lo) * k / (n_kappa - 1);
    InjectionSchedule sched;
    sched.D0 = D0;
    sched.n = n;
    sched.kappa = kappa;
    sched.t0 = 0.0;
    const double t_last = sched.times().back();
    // Cycles near their onset re-converge slowly after a perturbation, so
    // the default horizon is generous.
    const double run_horizon =
        horizon > 0.0 ? horizon : t_last + std::max(250.0 * T, 25000.0);

    const ProtocolResult res = run_protocol(p, sweep.s0, sched, run_horizon, cfg);

    // Post-injection extrema over 3 baseline periods after the last shot.
    KappaRecord rec;
    rec.kappa = kappa;
    rec.outcome = res.report.outcome;
    rec.max_U = -std::numeric_limits<double>::infinity();
    rec.min_U = std::numeric_limits<double>::infinity();
    rec.max_V = -std::numeric_limits<double>::infinity();
    const double w_end = t_last + 3.0 * T;
    for (std::size_t i = 0; i < res.trajectory.times.size(); ++i) {
      const double t = res.trajectory.times[i];
      if (t < t_last || t > w_end) continue;
      rec.max_U = std::max(rec.max_U, res.trajectory.states[i].U);
      rec.min_U = std::min(rec.min_U, res.trajectory.states[i].U);
      rec.max_V = std::max(rec.max_V, res.trajectory.states[i].V);
    }
    sweep.records.push_back(rec);
  }
  return sweep;
}

std::vector<DoseRecord> dosage_sweep(const ModelParams& p, double U0, double I0,
                                     double V0_lo, double V0_hi, int steps,
                                     double horizon, const IntegratorConfig& cfg) {
  if (steps < 2) throw std::invalid_argument("need at least two dose steps");
  if (!(V0_lo > 0.0) || !(V0_hi > V0_lo)) {
    throw std::invalid_argument("invalid V0 range");
  }
  std::vector<DoseRecord> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double V0 = V0_lo + (V0_hi - V0_lo) * i / (steps - 1);
    const State s0{U0, I0, V0};
    const OutcomeReport rep = integrate_to_outcome(p, s0, cfg, horizon);
    out.push_back({V0, rep.outcome, rep.final_state});
  }
  return out;
}

std::vector<BasinPoint> basin_slice(const ModelParams& p,
                                    const std::vector<double>& U0_values,
                                    const std::vector<double>& V0_values,
                                    double I0, double horizon,
                                    const IntegratorConfig& cfg) {
  std::vector<BasinPoint> out;
  out.reserve(U0_values.size() * V0_values.size());
  for (double U0 : U0_values) {
    for (double V0 : V0_values) {
      const State s0{U0, I0, V0};
      const OutcomeReport rep = integrate_to_outcome(p, s0, cfg, horizon);
      out.push_back({U0, V0, rep.outcome});
    }
  }
  return out;
}

}  // namespace virodyn
