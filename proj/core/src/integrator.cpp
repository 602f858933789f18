#include "virodyn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace virodyn {

namespace {

// Vector field with the boundary limits filled in: U·ln(K/U) -> 0 and the
// infection term -> 0 as U -> 0+, so trajectories clamped to an axis keep a
// well-defined (continuous) right-hand side.
State guarded_rhs(const ModelParams& p, const State& s) {
  const double U = s.U > 0.0 ? s.U : 0.0;
  const double I = s.I > 0.0 ? s.I : 0.0;
  const double S = U + I;
  // log(K) - log(U) instead of log(K/U): the quotient overflows to inf
  // once U goes denormal, which the deep square-wave minima actually reach.
  const double growth =
      U > 0.0 ? p.m * (std::log(p.K) - std::log(U)) * U : 0.0;
  const double infection = (U > 0.0 && S > 0.0) ? U * s.V / S : 0.0;
  State d;
  d.U = growth - infection;
  d.I = infection - p.xi * I;
  d.V = -p.gamma * s.V + p.xi * I;
  return d;
}

State axpy(const State& y, double h, double c1, const State& k1) {
  return {y.U + h * c1 * k1.U, y.I + h * c1 * k1.I, y.V + h * c1 * k1.V};
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

struct StepResult {
  State y;
  double err;  // scaled error norm; accept when <= 1
};

StepResult dopri_step(const ModelParams& p, const State& y, double h,
                      const IntegratorConfig& cfg) {
  const State k1 = guarded_rhs(p, y);
  State s = axpy(y, h, a21, k1);
  const State k2 = guarded_rhs(p, s);
  s = {y.U + h * (a31 * k1.U + a32 * k2.U), y.I + h * (a31 * k1.I + a32 * k2.I),
       y.V + h * (a31 * k1.V + a32 * k2.V)};
  const State k3 = guarded_rhs(p, s);
  s = {y.U + h * (a41 * k1.U + a42 * k2.U + a43 * k3.U),
       y.I + h * (a41 * k1.I + a42 * k2.I + a43 * k3.I),
       y.V + h * (a41 * k1.V + a42 * k2.V + a43 * k3.V)};
  const State k4 = guarded_rhs(p, s);
  s = {y.U + h * (a51 * k1.U + a52 * k2.U + a53 * k3.U + a54 * k4.U),
       y.I + h * (a51 * k1.I + a52 * k2.I + a53 * k3.I + a54 * k4.I),
       y.V + h * (a51 * k1.V + a52 * k2.V + a53 * k3.V + a54 * k4.V)};
  const State k5 = guarded_rhs(p, s);
  s = {y.U + h * (a61 * k1.U + a62 * k2.U + a63 * k3.U + a64 * k4.U + a65 * k5.U),
       y.I + h * (a61 * k1.I + a62 * k2.I + a63 * k3.I + a64 * k4.I + a65 * k5.I),
       y.V + h * (a61 * k1.V + a62 * k2.V + a63 * k3.V + a64 * k4.V + a65 * k5.V)};
  const State k6 = guarded_rhs(p, s);
  State ynew = {y.U + h * (b1 * k1.U + b3 * k3.U + b4 * k4.U + b5 * k5.U + b6 * k6.U),
                y.I + h * (b1 * k1.I + b3 * k3.I + b4 * k4.I + b5 * k5.I + b6 * k6.I),
                y.V + h * (b1 * k1.V + b3 * k3.V + b4 * k4.V + b5 * k5.V + b6 * k6.V)};
  const State k7 = guarded_rhs(p, ynew);

  const double eU = h * (e1 * k1.U + e3 * k3.U + e4 * k4.U + e5 * k5.U + e6 * k6.U + e7 * k7.U);
  const double eI = h * (e1 * k1.I + e3 * k3.I + e4 * k4.I + e5 * k5.I + e6 * k6.I + e7 * k7.I);
  const double eV = h * (e1 * k1.V + e3 * k3.V + e4 * k4.V + e5 * k5.V + e6 * k6.V + e7 * k7.V);

  auto scale = [&](double yi, double yn) {
    return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(yi), std::abs(yn));
  };
  const double rU = eU / scale(y.U, ynew.U);
  const double rI = eI / scale(y.I, ynew.I);
  const double rV = eV / scale(y.V, ynew.V);
  const double err = std::sqrt((rU * rU + rI * rI + rV * rV) / 3.0);
  return {ynew, err};
}

void apply_floor(State& y, double floor) {
  if (y.U < floor) y.U = 0.0;
  if (y.I < floor) y.I = 0.0;
  if (y.V < floor) y.V = 0.0;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
  if (floor < 0.0) throw std::invalid_argument("floor must be >= 0");
}

void InjectionSchedule::validate() const {
  if (n < 1) throw std::invalid_argument("injection count must be >= 1");
  if (D0 < 0.0) throw std::invalid_argument("total dose must be >= 0");
  if (n > 1 && !(kappa > 0.0)) {
    throw std::invalid_argument("inter-injection interval must be positive for n > 1");
  }
  if (t0 < 0.0) throw std::invalid_argument("first injection time must be >= 0");
}

std::vector<double> InjectionSchedule::times() const {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = t0 + i * kappa;
  return ts;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Eradication: return "Eradication";
    case Outcome::Coexistence: return "Coexistence";
    case Outcome::LimitCycle: return "LimitCycle";
    case Outcome::FailedTreatment: return "FailedTreatment";
    case Outcome::Undetermined: return "Undetermined";
  }
  return "?";
}

Trajectory integrate(const ModelParams& p, const State& s0, double t_end,
                     const IntegratorConfig& cfg, const InjectionSchedule* schedule) {
  p.validate();
  cfg.validate();
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (s0.U < 0.0 || s0.I < 0.0 || s0.V < 0.0) {
    throw std::domain_error("initial state components must be nonnegative");
  }

  std::vector<double> stops;
  if (schedule) {
    schedule->validate();
    for (double te : schedule->times()) {
      if (te >= 0.0 && te <= t_end) stops.push_back(te);
    }
  }
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());

  Trajectory traj;
  double t = 0.0;
  State y = s0;
  apply_floor(y, cfg.floor);
  traj.times.push_back(t);
  traj.states.push_back(y);

  const double dose = schedule ? schedule->dose_per_injection() : 0.0;
  double h = std::min(cfg.max_step, 1e-2);

  // Event-segment loop: walk the sorted stop list, applying the impulse
  // after reaching each injection time exactly.
  std::size_t next_stop = 0;
  // Injections scheduled at t = 0 fire before the first step.
  while (next_stop < stops.size() && stops[next_stop] == 0.0) {
    traj.events.push_back({0.0, dose, y.V, y.V + dose});
    y.V += dose;
    traj.states.back() = y;
    ++next_stop;
  }

  while (t < t_end) {
    const double seg_end =
        next_stop < stops.size() ? stops[next_stop] : t_end;
    // Integrate up to seg_end.
    h = std::min({h, cfg.max_step, seg_end - t});
    while (t < seg_end) {
      if (seg_end - t < h) h = seg_end - t;
      const StepResult r = dopri_step(p, y, h, cfg);
      if (!std::isfinite(r.err)) {
        h *= 0.1;
        if (h < 1e-13 * std::max(1.0, std::abs(t))) {
          throw IntegrationError("non-finite error estimate", t);
        }
        continue;
      }
      if (r.err <= 1.0) {
        t += h;
        y = r.y;
        apply_floor(y, cfg.floor);
        if (y.total() < cfg.absorb_total && !(y.U == 0 && y.I == 0 && y.V == 0)) {
          y = State{0.0, 0.0, 0.0};
          if (!traj.absorbed) {
            traj.absorbed = true;
            traj.absorbed_time = t;
          }
        } else if (y.U == 0 && y.I == 0 && y.V == 0 && !traj.absorbed) {
          traj.absorbed = true;
          traj.absorbed_time = t;
        }
        traj.times.push_back(t);
        traj.states.push_back(y);
        if (traj.absorbed) {
          // The origin is invariant; only a later injection can leave it.
          bool more_events = false;
          if (schedule) {
            for (double te : schedule->times()) {
              if (te > t) more_events = true;
            }
          }
          if (!more_events) return traj;
        }
        const double grow = 0.9 * std::pow(std::max(r.err, 1e-10), -0.2);
        h *= std::clamp(grow, 0.2, 5.0);
        h = std::min(h, cfg.max_step);
      } else {
        h *= std::clamp(0.9 * std::pow(r.err, -0.2), 0.1, 0.9);
      }
      if (h < 1e-13 * std::max(1.0, std::abs(t))) {
        throw IntegrationError("step size underflow", t);
      }
    }
    // Arrived exactly at seg_end; fire the impulse if it is an event time.
    if (next_stop < stops.size() && stops[next_stop] == seg_end) {
      if (schedule && seg_end < t_end) {
        traj.events.push_back({seg_end, dose, y.V, y.V + dose});
        y.V += dose;
        // Restart the step controller after the jump.
        h = std::min(cfg.max_step, 1e-2);
      } else if (schedule && seg_end == t_end) {
        // Injection exactly at the horizon: apply and record, final state
        // reflects the post-injection value.
        bool is_injection = false;
        for (double te : schedule->times()) {
          if (te == seg_end) is_injection = true;
        }
        if (is_injection) {
          traj.events.push_back({seg_end, dose, y.V, y.V + dose});
          y.V += dose;
          traj.states.back() = y;
        }
      }
      ++next_stop;
    }
  }
  return traj;
}

std::vector<Peak> find_peaks(const std::vector<double>& times,
                             const std::vector<double>& values, double eps) {
  std::vector<Peak> peaks;
  if (values.size() < 3) return peaks;

  auto refine = [&](std::size_t i) -> Peak {
    if (i == 0 || i + 1 >= values.size()) return {times[i], values[i]};
    // Quadratic through the three bracketing samples (non-uniform spacing).
    const double t0 = times[i - 1], t1 = times[i], t2 = times[i + 1];
    const double v0 = values[i - 1], v1 = values[i], v2 = values[i + 1];
    const double d01 = (v1 - v0) / (t1 - t0);
    const double d12 = (v2 - v1) / (t2 - t1);
    const double curv = (d12 - d01) / (t2 - t0);
    if (curv >= 0.0) return {t1, v1};
    const double tv = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
    const double vv = v0 + d01 * (tv - t0) + curv * (tv - t0) * (tv - t1);
    // Fall back to the sample if the vertex escaped the bracket.
    if (tv < t0 || tv > t2) return {t1, v1};
    return {tv, std::max(vv, v1)};
  };

  enum class Mode { Unknown, Rising, Falling };
  Mode mode = Mode::Unknown;
  double run_max = values[0], run_min = values[0];
  std::size_t arg_max = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double v = values[i];
    if (v > run_max) {
      run_max = v;
      arg_max = i;
    }
    if (v < run_min) run_min = v;
    if (mode != Mode::Falling && v < run_max - eps) {
      if (mode == Mode::Rising) peaks.push_back(refine(arg_max));
      mode = Mode::Falling;
      run_min = v;
    } else if (mode != Mode::Rising && v > run_min + eps) {
      mode = Mode::Rising;
      run_max = v;
      arg_max = i;
    }
  }
  return peaks;
}

namespace {

// Index of the first sample with time >= cutoff.
std::size_t window_start(const std::vector<double>& times, double cutoff) {
  auto it = std::lower_bound(times.begin(), times.end(), cutoff);
  if (it == times.end()) return times.size() - 1;
  return static_cast<std::size_t>(it - times.begin());
}

}  // namespace

OutcomeReport classify_trajectory(const ModelParams& p, const Trajectory& traj,
                                  double horizon) {
  OutcomeReport rep;
  rep.final_state = traj.states.back();
  rep.max_U = -std::numeric_limits<double>::infinity();
  rep.min_U = std::numeric_limits<double>::infinity();
  for (const State& s : traj.states) {
    rep.max_U = std::max(rep.max_U, s.U);
    rep.min_U = std::min(rep.min_U, s.U);
  }

  if (traj.absorbed) {
    // A later injection can lift V off the origin again; eradication of the
    // tumour itself is judged on U and I.
    if (rep.final_state.U == 0.0 && rep.final_state.I == 0.0) {
      rep.outcome = Outcome::Eradication;
      return rep;
    }
  }

  const std::size_t n = traj.states.size();
  const std::size_t w10 = window_start(traj.times, 0.9 * horizon);
  const std::size_t w20 = window_start(traj.times, 0.8 * horizon);

  // Failed treatment: pinned at (K, 0, 0) over the final 10% of the run.
  bool failed = w10 + 1 < n;
  for (std::size_t i = w10; i < n && failed; ++i) {
    const State& s = traj.states[i];
    if (std::abs(s.U - p.K) >= 1e-3 * p.K || s.I + s.V >= 1e-6) failed = false;
  }
  if (failed) {
    rep.outcome = Outcome::FailedTreatment;
    return rep;
  }

  // Limit cycle: at least 5 successive U-maxima agreeing in value and
  // spacing within 1%, with cycling still active at the end of the run.
  std::vector<double> Us(n);
  for (std::size_t i = 0; i < n; ++i) Us[i] = traj.states[i].U;
  const std::vector<Peak> peaks = find_peaks(traj.times, Us, 1e-4 * p.K);
  if (peaks.size() >= 5) {
    const std::size_t k = peaks.size();
    double vmin = peaks[k - 5].value, vmax = vmin;
    double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (std::size_t i = k - 5; i < k; ++i) {
      vmin = std::min(vmin, peaks[i].value);
      vmax = std::max(vmax, peaks[i].value);
      if (i > k - 5) {
        const double sp = peaks[i].t - peaks[i - 1].t;
        smin = std::min(smin, sp);
        smax = std::max(smax, sp);
      }
    }
    const double period = (peaks[k - 1].t - peaks[k - 5].t) / 4.0;
    const bool values_ok = (vmax - vmin) <= 0.01 * std::abs(vmax);
    const bool spacing_ok = (smax - smin) <= 0.01 * period;
    const bool recent = horizon - peaks[k - 1].t < 1.5 * period;
    if (values_ok && spacing_ok && recent) {
      double umin = std::numeric_limits<double>::infinity();
      const std::size_t lo = window_start(traj.times, peaks[k - 2].t);
      const std::size_t hi = window_start(traj.times, peaks[k - 1].t);
      for (std::size_t i = lo; i <= hi && i < n; ++i) umin = std::min(umin, Us[i]);
      rep.outcome = Outcome::LimitCycle;
      rep.cycle = CycleStats{0.5 * (vmin + vmax), umin, period};
      return rep;
    }
  }

  // Coexistence: negligible movement over the final 20% and the endpoint
  // sits on the closed-form interior equilibrium.
  if (p.gamma < 1.0 && w20 + 2 < n) {
    bool quiet = true;
    const State coex = coexistence_state(p);
    double mU = 0, mI = 0, mV = 0;
    std::size_t cnt = 0;
    for (std::size_t i = w20; i < n; ++i, ++cnt) {
      mU += traj.states[i].U;
      mI += traj.states[i].I;
      mV += traj.states[i].V;
    }
    mU /= cnt;
    mI /= cnt;
    mV /= cnt;
    double vU = 0, vI = 0, vV = 0;
    for (std::size_t i = w20; i < n; ++i) {
      vU += (traj.states[i].U - mU) * (traj.states[i].U - mU);
      vI += (traj.states[i].I - mI) * (traj.states[i].I - mI);
      vV += (traj.states[i].V - mV) * (traj.states[i].V - mV);
    }
    vU /= cnt;
    vI /= cnt;
    vV /= cnt;
    const double norm2 = mU * mU + mI * mI + mV * mV;
    if ((vU + vI + vV) / std::max(norm2, 1.0) >= 1e-8) quiet = false;
    const State& f = rep.final_state;
    const double dist = std::sqrt((f.U - coex.U) * (f.U - coex.U) +
                                  (f.I - coex.I) * (f.I - coex.I) +
                                  (f.V - coex.V) * (f.V - coex.V));
    const double cnorm = std::sqrt(coex.U * coex.U + coex.I * coex.I + coex.V * coex.V);
    if (quiet && dist < 1e-3 * cnorm) {
      rep.outcome = Outcome::Coexistence;
      return rep;
    }
  }

  // Eradication without having hit the absorbing threshold: the total is
  // tiny and still shrinking across the final 10% of the run.
  if (w10 + 1 < n) {
    bool tiny = true;
    for (std::size_t i = w10; i < n && tiny; ++i) {
      if (traj.states[i].total() >= 1e-6) tiny = false;
    }
    if (tiny && traj.states[n - 1].total() <= traj.states[w10].total()) {
      rep.outcome = Outcome::Eradication;
      return rep;
    }
  }

  rep.outcome = Outcome::Undetermined;
  return rep;
}

OutcomeReport integrate_to_outcome(const ModelParams& p, const State& s0,
                                   const IntegratorConfig& cfg, double horizon,
                                   const InjectionSchedule* schedule,
                                   Trajectory* traj_out) {
  Trajectory traj = integrate(p, s0, horizon, cfg, schedule);
  OutcomeReport rep = classify_trajectory(p, traj, horizon);
  if (traj_out) *traj_out = std::move(traj);
  return rep;
}

}  // namespace virodyn
