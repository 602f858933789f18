#include "virodyn/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace virodyn {

const char* to_string(ContinuationParam p) {
  switch (p) {
    case ContinuationParam::m: return "m";
    case ContinuationParam::xi: return "xi";
    case ContinuationParam::gamma: return "gamma";
  }
  return "?";
}

std::optional<ContinuationParam> parse_continuation_param(const std::string& name) {
  if (name == "m") return ContinuationParam::m;
  if (name == "xi") return ContinuationParam::xi;
  if (name == "gamma") return ContinuationParam::gamma;
  return std::nullopt;
}

double get_param(const ModelParams& p, ContinuationParam which) {
  switch (which) {
    case ContinuationParam::m: return p.m;
    case ContinuationParam::xi: return p.xi;
    case ContinuationParam::gamma: return p.gamma;
  }
  return 0.0;
}

void set_param(ModelParams& p, ContinuationParam which, double value) {
  switch (which) {
    case ContinuationParam::m: p.m = value; break;
    case ContinuationParam::xi: p.xi = value; break;
    case ContinuationParam::gamma: p.gamma = value; break;
  }
}

const char* to_string(BifurcationKind k) {
  switch (k) {
    case BifurcationKind::Hopf: return "Hopf";
    case BifurcationKind::Fold: return "Fold";
    case BifurcationKind::BranchPoint: return "BranchPoint";
    case BifurcationKind::GeneralizedHopf: return "GeneralizedHopf";
  }
  return "?";
}

const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::Supercritical: return "Supercritical";
    case Criticality::Subcritical: return "Subcritical";
    case Criticality::NotApplicable: return "NotApplicable";
  }
  return "?";
}

namespace {

Eigen::Vector3d residual(const ModelParams& p, const State& s) {
  const State d = rhs(p, s);
  return {d.U, d.I, d.V};
}

// Partial derivative of the vector field with respect to the varied
// parameter.
Eigen::Vector3d param_partial(const ModelParams& p, const State& s,
                              ContinuationParam which) {
  switch (which) {
    case ContinuationParam::m:
      return {std::log(p.K / s.U) * s.U, 0.0, 0.0};
    case ContinuationParam::xi:
      return {0.0, -s.I, s.I};
    case ContinuationParam::gamma:
      return {0.0, 0.0, -s.V};
  }
  return Eigen::Vector3d::Zero();
}

bool state_admissible(const State& s) {
  return s.U > 0.0 && s.U + s.I > 0.0;
}

// Newton at fixed parameter value; returns false on non-convergence.
bool newton_fixed_param(const ModelParams& p, State& x,
                        const ContinuationOptions& opts) {
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    if (!state_admissible(x)) return false;
    const Eigen::Vector3d F = residual(p, x);
    if (F.norm() < opts.newton_tol) return true;
    const Eigen::Matrix3d J = jacobian(p, x);
    const Eigen::Vector3d dx = J.fullPivLu().solve(-F);
    x.U += dx(0);
    x.I += dx(1);
    x.V += dx(2);
  }
  if (!state_admissible(x)) return false;
  return residual(p, x).norm() < opts.newton_tol;
}

bool point_stable(const ModelParams& p, const State& x) {
  const auto ev = eigenvalues(jacobian(p, x));
  double max_re = ev[0].real();
  for (const auto& l : ev) max_re = std::max(max_re, l.real());
  return max_re < 0.0;
}

// Monic characteristic coefficients of the requested branch kind at the
// given parameters (closed form; independent of the numeric branch state).
CubicCoefficients branch_charpoly(const ModelParams& p, EquilibriumKind kind) {
  return (kind == EquilibriumKind::FailedTreatment ? charpoly_failed(p)
                                                   : charpoly_coexistence(p))
      .monic();
}

double fold_test(const ModelParams& p, EquilibriumKind kind) {
  return branch_charpoly(p, kind).a3;
}

double hopf_test(const ModelParams& p, EquilibriumKind kind) {
  const CubicCoefficients c = branch_charpoly(p, kind);
  return c.a1 * c.a2 - c.a3;
}

double bisect_param(const ModelParams& base, ContinuationParam which, double lo,
                    double hi, double f_lo,
                    const std::function<double(const ModelParams&)>& f,
                    double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    ModelParams q = base;
    set_param(q, which, mid);
    const double fm = f(q);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scans [lo, hi] for sign changes of the closed-form fold and Hopf test
// functions and refines each to |delta param| < 1e-6.
std::vector<BifurcationPoint> detect_singularities(const ModelParams& base,
                                                   EquilibriumKind kind,
                                                   ContinuationParam which,
                                                   double lo, double hi) {
  std::vector<BifurcationPoint> out;
  constexpr int n_scan = 2000;
  constexpr double refine_tol = 1e-7;

  auto scan = [&](const std::function<double(const ModelParams&)>& f,
                  const std::function<void(double, const ModelParams&)>& emit) {
    double prev_val = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= n_scan; ++i) {
      const double a = lo + (hi - lo) * i / n_scan;
      ModelParams q = base;
      set_param(q, which, a);
      if (!(q.m > 0.0 && q.xi > 0.0 && q.gamma > 0.0)) continue;
      const double v = f(q);
      if (have_prev && prev_val != 0.0 && v != 0.0 &&
          (prev_val > 0.0) != (v > 0.0)) {
        const double a_prev = lo + (hi - lo) * (i - 1) / n_scan;
        const double root =
            bisect_param(base, which, a_prev, a, prev_val, f, refine_tol);
        ModelParams q_root = base;
        set_param(q_root, which, root);
        emit(root, q_root);
      }
      prev_val = v;
      have_prev = true;
    }
  };

  scan([&](const ModelParams& q) { return fold_test(q, kind); },
       [&](double root, const ModelParams& q_root) {
         BifurcationPoint bp;
         bp.param1 = which;
         bp.value1 = root;
         // A zero eigenvalue where the branch sits on (K,0,0) is a
         // coalescence with the failed-treatment branch, not a fold.
         bool on_failed_branch = kind == EquilibriumKind::FailedTreatment;
         if (kind == EquilibriumKind::Coexistence) {
           const State star = coexistence_state(q_root);
           on_failed_branch = std::abs(star.U - q_root.K) < 1e-4 * q_root.K &&
                              std::abs(star.I) < 1e-4 * q_root.K &&
                              std::abs(star.V) < 1e-4 * q_root.K;
         }
         bp.kind = on_failed_branch ? BifurcationKind::BranchPoint
                                    : BifurcationKind::Fold;
         out.push_back(bp);
       });

  scan([&](const ModelParams& q) { return hopf_test(q, kind); },
       [&](double root, const ModelParams& q_root) {
         const CubicCoefficients c = branch_charpoly(q_root, kind);
         // Genuine Hopf: purely imaginary pair, omega^2 = a2 > 0, and the
         // remaining real root negative (a3 > 0 for the monic cubic).
         if (!(c.a2 > 0.0) || !(c.a3 > 0.0)) return;
         BifurcationPoint bp;
         bp.kind = BifurcationKind::Hopf;
         bp.param1 = which;
         bp.value1 = root;
         bp.omega = std::sqrt(c.a2);
         out.push_back(bp);
       });

  std::sort(out.begin(), out.end(),
            [](const BifurcationPoint& a, const BifurcationPoint& b) {
              return a.value1 < b.value1;
            });
  return out;
}

}  // namespace

Branch continue_equilibrium(const ModelParams& p0, EquilibriumKind which,
                            ContinuationParam param, double lo, double hi,
                            const ContinuationOptions& opts) {
  if (which == EquilibriumKind::Eradication) {
    throw std::invalid_argument(
        "the eradication branch is handled by eradication_branch_stability");
  }
  p0.validate();
  if (!(lo < hi)) throw std::invalid_argument("empty continuation range");
  const double alpha0 = std::clamp(get_param(p0, param), lo, hi);

  Branch branch;
  branch.param = param;
  branch.kind = which;

  ModelParams p_start = p0;
  set_param(p_start, param, alpha0);
  State x0 = which == EquilibriumKind::FailedTreatment
                 ? State{p_start.K, 0.0, 0.0}
                 : coexistence_state(p_start);
  if (!state_admissible(x0) || !newton_fixed_param(p_start, x0, opts)) {
    branch.truncated = true;
    branch.note = "no admissible equilibrium at the starting parameters";
    return branch;
  }

  const double Kscale = p_start.K;

  // Trace one direction of the branch with pseudo-arclength steps; the
  // state block of the tangent lives in U/K units so parameter and state
  // contributions to arclength are comparable.
  auto trace = [&](double dir, std::vector<BranchSample>& out) -> bool {
    ModelParams p = p_start;
    State x = x0;
    double alpha = alpha0;

    Eigen::Matrix3d J = jacobian(p, x);
    Eigen::Vector3d dxda = J.fullPivLu().solve(-param_partial(p, x, param));
    Eigen::Vector4d tau;
    tau << dxda(0) / Kscale, dxda(1) / Kscale, dxda(2) / Kscale, 1.0;
    tau.normalize();
    tau *= dir;

    double ds = opts.ds0;
    for (int n = 0; n < opts.max_points; ++n) {
      // Predictor.
      State xp{x.U + ds * tau(0) * Kscale, x.I + ds * tau(1) * Kscale,
               x.V + ds * tau(2) * Kscale};
      double ap = alpha + ds * tau(3);

      // Corrector: Newton on the bordered system.
      bool ok = false;
      State xc = xp;
      double ac = ap;
      for (int it = 0; it < opts.newton_max_iter; ++it) {
        if (!(ac > 0.0) || !state_admissible(xc)) break;
        ModelParams q = p;
        set_param(q, param, ac);
        const Eigen::Vector3d F = residual(q, xc);
        const double N = tau(0) * (xc.U - x.U) / Kscale +
                         tau(1) * (xc.I - x.I) / Kscale +
                         tau(2) * (xc.V - x.V) / Kscale + tau(3) * (ac - alpha) -
                         ds;
        if (F.norm() < opts.newton_tol && std::abs(N) < opts.newton_tol) {
          ok = true;
          break;
        }
        Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
        A.block<3, 3>(0, 0) = jacobian(q, xc);
        A.block<3, 1>(0, 3) = param_partial(q, xc, param);
        A(3, 0) = tau(0) / Kscale;
        A(3, 1) = tau(1) / Kscale;
        A(3, 2) = tau(2) / Kscale;
        A(3, 3) = tau(3);
        Eigen::Vector4d rhs4;
        rhs4 << -F(0), -F(1), -F(2), -N;
        const Eigen::Vector4d d = A.fullPivLu().solve(rhs4);
        xc.U += d(0);
        xc.I += d(1);
        xc.V += d(2);
        ac += d(3);
      }

      if (!ok) {
        ds *= 0.5;
        if (ds < opts.ds_min) return false;  // step underflow
        continue;
      }

      if (!state_admissible(xc) || xc.I < -1e-9 || xc.V < -1e-9) {
        // Left the physical region; stop cleanly.
        return true;
      }

      // New tangent from the secant, keeping orientation.
      Eigen::Vector4d tnew;
      tnew << (xc.U - x.U) / Kscale, (xc.I - x.I) / Kscale,
          (xc.V - x.V) / Kscale, ac - alpha;
      if (tnew.norm() > 0.0) {
        tnew.normalize();
        if (tnew.dot(tau) > 0.0) tau = tnew;
      }

      x = xc;
      alpha = ac;
      ModelParams q = p;
      set_param(q, param, alpha);
      out.push_back({alpha, x, point_stable(q, x)});

      if (alpha < lo || alpha > hi) return true;

      ds = std::min(ds * 1.3, opts.ds_max);
    }
    return true;
  };

  std::vector<BranchSample> down, up;
  const bool ok_down = trace(-1.0, down);
  const bool ok_up = trace(+1.0, up);
  if (!ok_down || !ok_up) {
    branch.truncated = true;
    branch.note = "continuation step underflow";
  }

  std::reverse(down.begin(), down.end());
  branch.points = std::move(down);
  {
    ModelParams q = p_start;
    branch.points.push_back({alpha0, x0, point_stable(q, x0)});
  }
  branch.points.insert(branch.points.end(), up.begin(), up.end());

  branch.bifurcations = detect_singularities(p_start, which, param, lo, hi);
  if (opts.classify_hopf_points) {
    for (BifurcationPoint& bp : branch.bifurcations) {
      if (bp.kind != BifurcationKind::Hopf) continue;
      ModelParams q = p_start;
      set_param(q, param, bp.value1);
      bp.criticality =
          classify_hopf(q, param, opts.hopf_offset, opts.hopf_horizon);
    }
  }
  return branch;
}

EradicationScan eradication_branch_stability(const ModelParams& base,
                                             ContinuationParam param, double lo,
                                             double hi, int n_samples,
                                             double tol, double probe_horizon) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  EradicationScan scan;
  scan.param = param;

  auto verdict_at = [&](double value) {
    ModelParams q = base;
    set_param(q, param, value);
    Verdict v = eradication_probe(q, std::nullopt, probe_horizon).verdict;
    if (v == Verdict::Indeterminate) {
      // Collapse toward the origin slows as ~1/param near the branch ends;
      // one doubled-horizon retry resolves orbits caught mid-collapse.
      v = eradication_probe(q, std::nullopt, 2.0 * probe_horizon).verdict;
    }
    return v;
  };

  for (int i = 0; i < n_samples; ++i) {
    const double a = lo + (hi - lo) * i / (n_samples - 1);
    scan.samples.emplace_back(a, verdict_at(a));
  }

  for (std::size_t i = 1; i < scan.samples.size(); ++i) {
    const Verdict va = scan.samples[i - 1].second;
    const Verdict vb = scan.samples[i].second;
    const bool flip = (va == Verdict::Stable) != (vb == Verdict::Stable);
    if (!flip || va == Verdict::Indeterminate || vb == Verdict::Indeterminate) {
      continue;
    }
    double a = scan.samples[i - 1].first, b = scan.samples[i].first;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const Verdict vm = verdict_at(mid);
      if ((vm == Verdict::Stable) == (va == Verdict::Stable)) {
        a = mid;
      } else {
        b = mid;
      }
    }
    BifurcationPoint bp;
    bp.kind = BifurcationKind::Fold;
    bp.param1 = param;
    bp.value1 = 0.5 * (a + b);
    scan.fold = bp;
    break;
  }
  return scan;
}

std::vector<HopfPoint> hopf_locus(const ModelParams& base,
                                  ContinuationParam sweep,
                                  const std::vector<double>& sweep_values,
                                  ContinuationParam solve_for, double solve_lo,
                                  double solve_hi, int scan_intervals,
                                  bool classify) {
  std::vector<HopfPoint> locus;
  for (double sv : sweep_values) {
    ModelParams q0 = base;
    set_param(q0, sweep, sv);

    auto h = [&](const ModelParams& q) {
      return hopf_test(q, EquilibriumKind::Coexistence);
    };

    double prev = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= scan_intervals; ++i) {
      const double a = solve_lo + (solve_hi - solve_lo) * i / scan_intervals;
      ModelParams q = q0;
      set_param(q, solve_for, a);
      if (!(q.m > 0.0 && q.xi > 0.0 && q.gamma > 0.0)) continue;
      const double v = h(q);
      if (have_prev && prev != 0.0 && v != 0.0 && (prev > 0.0) != (v > 0.0)) {
        const double a_prev =
            solve_lo + (solve_hi - solve_lo) * (i - 1) / scan_intervals;
        const double root = bisect_param(q0, solve_for, a_prev, a, prev, h, 1e-10);
        ModelParams q_root = q0;
        set_param(q_root, solve_for, root);
        const CubicCoefficients c =
            branch_charpoly(q_root, EquilibriumKind::Coexistence);
        if (c.a2 > 0.0 && c.a3 > 0.0) {
          HopfPoint hp;
          hp.params = q_root;
          hp.omega = std::sqrt(c.a2);
          if (classify) hp.criticality = classify_hopf(q_root, solve_for);
          locus.push_back(hp);
        }
      }
      prev = v;
      have_prev = true;
    }
  }
  return locus;
}

Criticality classify_hopf(const ModelParams& at_hopf, ContinuationParam varied,
                          double offset, double horizon) {
  IntegratorConfig cfg;
  for (double side : {+1.0, -1.0}) {
    ModelParams q = at_hopf;
    set_param(q, varied, get_param(at_hopf, varied) + side * offset);
    if (!(q.m > 0.0 && q.xi > 0.0 && q.gamma > 0.0 && q.gamma < 1.0)) continue;
    if (routh_hurwitz_stable(charpoly_coexistence(q))) continue;

    const State star = coexistence_state(q);
    if (!(star.U > 0.0) || !(star.I > 0.0)) continue;
    State s0 = star;
    s0.U += 1e-3 * q.K;

    const OutcomeReport rep = integrate_to_outcome(q, s0, cfg, horizon);
    if (rep.outcome == Outcome::LimitCycle && rep.cycle &&
        rep.cycle->U_min < star.U && star.U < rep.cycle->U_max) {
      return Criticality::Supercritical;
    }
    if (rep.outcome == Outcome::Eradication ||
        rep.outcome == Outcome::FailedTreatment ||
        rep.outcome == Outcome::Coexistence) {
      // The orbit left the equilibrium's neighbourhood for another
      // attractor: no stable cycle was born here.
      return Criticality::Subcritical;
    }
  }
  return Criticality::NotApplicable;
}

std::optional<BifurcationPoint> generalized_hopf(const ModelParams& base,
                                                 ContinuationParam sweep,
                                                 double sweep_lo, double sweep_hi,
                                                 ContinuationParam solve_for,
                                                 double solve_lo, double solve_hi,
                                                 double tol) {
  auto hopf_at = [&](double sv) -> std::optional<HopfPoint> {
    const auto pts = hopf_locus(base, sweep, {sv}, solve_for, solve_lo, solve_hi);
    if (pts.empty()) return std::nullopt;
    return pts.front();
  };
  auto crit_at = [&](const HopfPoint& hp) {
    return classify_hopf(hp.params, solve_for);
  };

  auto h_lo = hopf_at(sweep_lo);
  auto h_hi = hopf_at(sweep_hi);
  if (!h_lo || !h_hi) return std::nullopt;
  Criticality c_lo = crit_at(*h_lo);
  Criticality c_hi = crit_at(*h_hi);
  if (c_lo == c_hi || c_lo == Criticality::NotApplicable ||
      c_hi == Criticality::NotApplicable) {
    return std::nullopt;
  }

  double lo = sweep_lo, hi = sweep_hi;
  std::optional<HopfPoint> at_mid;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const auto hm = hopf_at(mid);
    if (!hm) return std::nullopt;
    const Criticality cm = crit_at(*hm);
    if (cm == Criticality::NotApplicable) break;
    if (cm == c_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
    at_mid = hm;
  }
  if (!at_mid) at_mid = hopf_at(0.5 * (lo + hi));
  if (!at_mid) return std::nullopt;

  BifurcationPoint bp;
  bp.kind = BifurcationKind::GeneralizedHopf;
  bp.param1 = sweep;
  bp.value1 = get_param(at_mid->params, sweep);
  bp.param2 = solve_for;
  bp.value2 = get_param(at_mid->params, solve_for);
  bp.omega = at_mid->omega;
  return bp;
}

std::vector<CycleMeasurement> track_cycles(const ModelParams& base,
                                           ContinuationParam param, double lo,
                                           double hi, double step,
                                           double horizon,
                                           const IntegratorConfig& cfg) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  std::vector<CycleMeasurement> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double a = lo + i * step;
    ModelParams q = base;
    set_param(q, param, a);
    if (!(q.m > 0.0 && q.xi > 0.0 && q.gamma > 0.0)) continue;

    const State s0{0.5 * q.K, 0.1 * q.K, 0.1 * q.K};
    Trajectory traj;
    const OutcomeReport rep = integrate_to_outcome(q, s0, cfg, horizon, nullptr, &traj);
    if (rep.outcome == Outcome::LimitCycle && rep.cycle) {
      out.push_back({a, rep.cycle->U_max, rep.cycle->U_min, rep.cycle->period, true});
      continue;
    }
    // Oscillating but not converged within the horizon: report the last
    // observed peaks as an unconverged measurement.
    std::vector<double> Us(traj.states.size());
    for (std::size_t j = 0; j < traj.states.size(); ++j) Us[j] = traj.states[j].U;
    const auto peaks = find_peaks(traj.times, Us, 1e-4 * q.K);
    if (peaks.size() >= 5 && rep.outcome == Outcome::Undetermined) {
      const std::size_t k = peaks.size();
      const double period = (peaks[k - 1].t - peaks[k - 5].t) / 4.0;
      double vmax = peaks[k - 5].value;
      for (std::size_t j = k - 5; j < k; ++j) vmax = std::max(vmax, peaks[j].value);
      double umin = rep.min_U;
      out.push_back({a, vmax, umin, period, false});
    }
  }
  return out;
}

}  // namespace virodyn
