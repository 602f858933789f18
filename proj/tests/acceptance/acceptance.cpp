// Acceptance gate: ten numbered end-to-end checks, one pass/fail line
// each. Exit status is the number of failed checks.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "virodyn/continuation.hpp"
#include "virodyn/protocol.hpp"
#include "virodyn/stability.hpp"

using namespace virodyn;

namespace {

int g_failures = 0;

struct Check {
  std::string label;
  bool ok = true;
  std::vector<std::string> notes;

  explicit Check(std::string l) : label(std::move(l)) {}

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }

  void finish(int number) {
    std::printf("ACCEPTANCE %2d: %s  %s\n", number, ok ? "PASS" : "FAIL",
                label.c_str());
    for (const std::string& n : notes) std::printf("    - %s\n", n.c_str());
    if (!ok) ++g_failures;
    std::fflush(stdout);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

const ModelParams kBase{0.1, 0.01, 0.1, 100.0};

void criterion_1() {
  Check c("coexistence equilibrium at U* = 40.65 from closed form and simulation");
  const double closed = coexistence_state(kBase).U;
  c.expect(std::abs(closed - 40.65) <= 0.01,
           "closed form U* = " + fmt(closed));
  const OutcomeReport rep =
      integrate_to_outcome(kBase, {50.0, 10.0, 10.0}, {}, 20000.0);
  c.expect(rep.outcome == Outcome::Coexistence,
           std::string("outcome = ") + to_string(rep.outcome));
  c.expect(std::abs(rep.final_state.U - 40.65) <= 0.01,
           "simulated U = " + fmt(rep.final_state.U));
  c.finish(1);
}

void criterion_2() {
  Check c("supercritical Hopf at xi = 0.042 +/- 0.002 (m=0.1, gamma=0.1)");
  const Branch b = continue_equilibrium(kBase, EquilibriumKind::Coexistence,
                                        ContinuationParam::xi, 0.005, 0.2);
  const BifurcationPoint* hopf = nullptr;
  for (const auto& bp : b.bifurcations) {
    if (bp.kind == BifurcationKind::Hopf) hopf = &bp;
  }
  c.expect(hopf != nullptr, "no Hopf point detected on the branch");
  if (hopf) {
    c.expect(std::abs(hopf->value1 - 0.042) <= 0.002,
             "Hopf at xi = " + fmt(hopf->value1));
    c.expect(hopf->criticality == Criticality::Supercritical,
             std::string("criticality = ") + to_string(hopf->criticality));
  }
  c.finish(2);
}

void criterion_3() {
  Check c("eradication onset at xi = 0.098 +/- 0.002 and gamma = 0.0103 +/- 0.002, probe eigenvalues in band");
  const EradicationScan sx = eradication_branch_stability(
      kBase, ContinuationParam::xi, 0.05, 0.15, 11);
  c.expect(sx.fold.has_value(), "no xi stability change found");
  if (sx.fold) {
    c.expect(std::abs(sx.fold->value1 - 0.098) <= 0.002,
             "xi flip at " + fmt(sx.fold->value1));
  }

  ModelParams pg = kBase;
  pg.gamma = 0.05;
  const EradicationScan sg = eradication_branch_stability(
      pg, ContinuationParam::gamma, 0.005, 0.05, 10);
  c.expect(sg.fold.has_value(), "no gamma stability change found");
  if (sg.fold) {
    c.expect(std::abs(sg.fold->value1 - 0.0103) <= 0.002,
             "gamma flip at " + fmt(sg.fold->value1));
  }

  ModelParams p95 = kBase;
  p95.xi = 0.095;
  const ProbeResult r95 = eradication_probe(p95);
  c.expect(r95.eigenvalues[0].real() < 0.0 && r95.eigenvalues[1].real() < 0.0 &&
               r95.eigenvalues[2].real() > 0.0,
           "xi=0.095 sign pattern not (-,-,+)");
  const double l3 = r95.eigenvalues[2].real();
  c.expect(l3 >= 8e-5 / 3.0 && l3 <= 8e-5 * 3.0,
           "xi=0.095 lambda3 = " + fmt(l3));

  ModelParams p99 = kBase;
  p99.xi = 0.099;
  const double l3b = eradication_probe(p99).eigenvalues[2].real();
  c.expect(l3b < 0.0 && std::abs(l3b) >= 2e-3 / 3.0 && std::abs(l3b) <= 2e-3 * 3.0,
           "xi=0.099 lambda3 = " + fmt(l3b));
  c.finish(3);
}

void criterion_4() {
  Check c("bistable window: xi_SN = 0.1359 +/- 0.002 < xi_HB = 0.1388 +/- 0.002, subcritical");
  ModelParams p = kBase;
  p.m = 0.5;
  const EradicationScan scan = eradication_branch_stability(
      p, ContinuationParam::xi, 0.1, 0.2, 11);
  c.expect(scan.fold.has_value(), "no xi_SN found");
  double xi_sn = 0.0;
  if (scan.fold) {
    xi_sn = scan.fold->value1;
    c.expect(std::abs(xi_sn - 0.1359) <= 0.002, "xi_SN = " + fmt(xi_sn));
  }

  const Branch b = continue_equilibrium(p, EquilibriumKind::Coexistence,
                                        ContinuationParam::xi, 0.1, 0.2);
  const BifurcationPoint* hopf = nullptr;
  for (const auto& bp : b.bifurcations) {
    if (bp.kind == BifurcationKind::Hopf) hopf = &bp;
  }
  c.expect(hopf != nullptr, "no xi_HB found");
  if (hopf) {
    c.expect(std::abs(hopf->value1 - 0.1388) <= 0.002,
             "xi_HB = " + fmt(hopf->value1));
    c.expect(hopf->criticality == Criticality::Subcritical,
             std::string("criticality = ") + to_string(hopf->criticality));
    if (scan.fold) c.expect(xi_sn < hopf->value1, "ordering xi_SN < xi_HB violated");
  }
  c.finish(4);
}

void criterion_5() {
  Check c("node/spiral switch at xi = 0.01675 +/- 0.001 (m=0.1, gamma=0.1)");
  const double xi = node_spiral_switch_xi(0.1, 0.1, 100.0, 0.005, 0.03);
  c.expect(std::abs(xi - 0.01675) <= 0.001, "switch at xi = " + fmt(xi));
  c.finish(5);
}

void criterion_6() {
  Check c("four regimes from (50,10,10): coexistence, cycle, square-wave cycle, eradication");
  ModelParams p = kBase;
  const State s0{50.0, 10.0, 10.0};

  p.xi = 0.01;
  c.expect(integrate_to_outcome(p, s0, {}, 20000.0).outcome == Outcome::Coexistence,
           "xi=0.01 not Coexistence");

  p.xi = 0.06;
  c.expect(integrate_to_outcome(p, s0, {}, 20000.0).outcome == Outcome::LimitCycle,
           "xi=0.06 not LimitCycle");

  p.xi = 0.097;
  const OutcomeReport sq = integrate_to_outcome(p, s0, {}, 30000.0);
  c.expect(sq.outcome == Outcome::LimitCycle, "xi=0.097 not LimitCycle");
  if (sq.cycle) {
    c.expect(sq.cycle->U_max > 0.9 * p.K, "square-wave Umax = " + fmt(sq.cycle->U_max));
    c.expect(sq.cycle->U_min < 0.01 * p.K, "square-wave Umin = " + fmt(sq.cycle->U_min));
  } else {
    c.expect(false, "xi=0.097 produced no cycle statistics");
  }

  p.xi = 0.12;
  c.expect(integrate_to_outcome(p, s0, {}, 20000.0).outcome == Outcome::Eradication,
           "xi=0.12 not Eradication");
  c.finish(6);
}

void criterion_7() {
  Check c("no Hopf point for m < 0.008 at gamma = 0.1, xi in (0, 1]");
  std::vector<double> small_m;
  for (int i = 1; i <= 79; ++i) small_m.push_back(i * 1e-4);
  const auto locus = hopf_locus(kBase, ContinuationParam::m, small_m,
                                ContinuationParam::xi, 1e-6, 1.0, 400,
                                /*classify=*/false);
  if (!locus.empty()) {
    c.expect(false, "found " + std::to_string(locus.size()) +
                        " Hopf points, e.g. m = " + fmt(locus.front().params.m) +
                        ", xi = " + fmt(locus.front().params.xi));
  }
  c.finish(7);
}

void criterion_8() {
  Check c("dosage sweep: U0=100 all eradicated on [20,120]; U0=50 shows E-C-E structure");
  ModelParams p = kBase;
  p.m = 0.5;
  p.xi = 0.138;

  const auto high = dosage_sweep(p, 100.0, 10.0, 20.0, 120.0, 11);
  for (const auto& r : high) {
    c.expect(r.outcome == Outcome::Eradication,
             "U0=100, V0=" + fmt(r.V0) + " -> " + to_string(r.outcome));
  }

  const auto mid = dosage_sweep(p, 50.0, 10.0, 20.0, 200.0, 19);
  c.expect(mid.front().outcome == Outcome::Eradication,
           "U0=50 low end not Eradication");
  c.expect(mid.back().outcome == Outcome::Eradication,
           "U0=50 high end not Eradication");
  int transitions = 0;
  bool has_coexistence = false;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    if (i > 0 && mid[i].outcome != mid[i - 1].outcome) ++transitions;
    if (mid[i].outcome == Outcome::Coexistence) has_coexistence = true;
  }
  c.expect(transitions == 2, "expected E-C-E, saw " + std::to_string(transitions) +
                                 " transitions");
  c.expect(has_coexistence, "no Coexistence interval found");
  c.finish(8);
}

void criterion_9() {
  Check c("kappa sweep: every 2-injection protocol stays on the cycle; extremes at the kappa nearest the U-minimum");
  const ModelParams p{0.2, 0.06915, 0.1, 100.0};
  const KappaSweepResult sweep = kappa_sweep(p, 20.0, 2, 5.0, 110.0, 12);
  for (const auto& r : sweep.records) {
    c.expect(r.outcome == Outcome::LimitCycle,
             "kappa=" + fmt(r.kappa) + " -> " + to_string(r.outcome));
  }

  // Phase of the U-minimum after the first injection, measured on the
  // singly-dosed orbit from the same phase reference.
  InjectionSchedule one;
  one.D0 = 20.0 / 2.0;
  one.n = 1;
  const Trajectory ref = integrate(p, sweep.s0, sweep.baseline_period, {}, &one);
  double t_min = 0.0, u_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ref.times.size(); ++i) {
    if (ref.states[i].U < u_min) {
      u_min = ref.states[i].U;
      t_min = ref.times[i];
    }
  }

  double nearest = sweep.records.front().kappa;
  double lo_min = std::numeric_limits<double>::infinity();
  double hi_max = -std::numeric_limits<double>::infinity();
  double argmin = 0.0, argmax = 0.0;
  for (const auto& r : sweep.records) {
    if (std::abs(r.kappa - t_min) < std::abs(nearest - t_min)) nearest = r.kappa;
    if (r.min_U < lo_min) {
      lo_min = r.min_U;
      argmin = r.kappa;
    }
    if (r.max_U > hi_max) {
      hi_max = r.max_U;
      argmax = r.kappa;
    }
  }
  c.expect(argmin == nearest, "lowest minimum at kappa=" + fmt(argmin) +
                                  ", U-minimum phase at t=" + fmt(t_min) +
                                  " (nearest kappa " + fmt(nearest) + ")");
  c.expect(argmax == nearest, "highest maximum at kappa=" + fmt(argmax) +
                                  ", nearest kappa " + fmt(nearest));
  c.finish(9);
}

void criterion_10() {
  Check c("property suites: stability oracle, Jacobian, contour round-trip, dose conservation, zero roots");

  // Routh-Hurwitz verdict against the Jacobian eigenvalue oracle.
  {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1.0));
    std::uniform_real_distribution<double> gam(0.01, 0.99);
    int disagreements = 0;
    int draws = 0;
    while (draws < 10000) {
      const ModelParams p{std::exp(logu(rng)), std::exp(logu(rng)), gam(rng),
                          100.0};
      const State star = coexistence_state(p);
      if (!(star.U > 1e-30)) continue;  // equilibrium below representable range
      ++draws;
      const auto ev = eigenvalues(jacobian(p, star));
      double min_abs_re = 1e300;
      for (const auto& l : ev) min_abs_re = std::min(min_abs_re, std::abs(l.real()));
      if (min_abs_re < 1e-9) continue;  // boundary band
      const bool oracle_stable = ev[2].real() < 0.0;
      if (routh_hurwitz_stable(charpoly_coexistence(p)) != oracle_stable) {
        ++disagreements;
      }
    }
    c.expect(disagreements == 0,
             std::to_string(disagreements) + " stability disagreements");
  }

  // Analytic vs finite-difference Jacobian.
  {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.5, 100.0);
    std::uniform_real_distribution<double> par(0.01, 0.9);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const ModelParams p{par(rng), par(rng), par(rng), 100.0};
      const State s{u(rng), u(rng), u(rng)};
      const Eigen::Matrix3d J = jacobian(p, s);
      Eigen::Matrix3d Jfd;
      auto comp = [](State& st, int j) -> double& {
        return j == 0 ? st.U : j == 1 ? st.I : st.V;
      };
      for (int j = 0; j < 3; ++j) {
        State lo = s, hi = s;
        const double h = 1e-6 * std::max(1.0, std::abs(comp(lo, j)));
        comp(lo, j) -= h;
        comp(hi, j) += h;
        const State flo = rhs(p, lo), fhi = rhs(p, hi);
        Jfd(0, j) = (fhi.U - flo.U) / (2 * h);
        Jfd(1, j) = (fhi.I - flo.I) / (2 * h);
        Jfd(2, j) = (fhi.V - flo.V) / (2 * h);
      }
      const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
      if ((J - Jfd).cwiseAbs().maxCoeff() / scale > 1e-6) ++bad;
    }
    c.expect(bad == 0, std::to_string(bad) + " Jacobian mismatches");
  }

  // Threshold-contour round-trip.
  {
    int bad = 0;
    for (double m : {0.05, 0.1, 0.3}) {
      for (double g : {0.05, 0.2, 0.8}) {
        for (double U_T : {5.0, 40.0, 95.0}) {
          const ModelParams p{m, threshold_contour(m, g, 100.0, U_T), g, 100.0};
          if (std::abs(coexistence_state(p).U - U_T) > 1e-8 * U_T) ++bad;
        }
      }
    }
    c.expect(bad == 0, std::to_string(bad) + " contour round-trip failures");
  }

  // Injection dose conservation to machine precision.
  {
    InjectionSchedule s;
    s.D0 = 40.0;
    s.n = 4;
    s.kappa = 17.3;
    s.t0 = 3.1;
    const Trajectory traj =
        integrate(kBase, {50.0, 10.0, 10.0}, 200.0, {}, &s);
    double total = 0.0;
    for (const auto& e : traj.events) total += e.V_post - e.V_pre;
    c.expect(traj.events.size() == 4 && total == 40.0,
             "injected total = " + fmt(total));
  }

  // Exact zero characteristic roots at gamma = 1 and xi = 0.
  {
    ModelParams p = kBase;
    p.gamma = 1.0;
    const auto rg = cubic_roots(charpoly_coexistence(p).monic());
    double min_abs = 1e300;
    for (const auto& r : rg) min_abs = std::min(min_abs, std::abs(r));
    c.expect(min_abs < 1e-10, "gamma=1 zero root off by " + fmt(min_abs));
    c.expect(std::abs(charpoly_failed(p).monic().a3) < 1e-10,
             "gamma=1 failed-treatment constant term nonzero");

    ModelParams p0 = kBase;
    p0.xi = 0.0;
    const auto r0 = cubic_roots(charpoly_coexistence(p0).monic());
    min_abs = 1e300;
    for (const auto& r : r0) min_abs = std::min(min_abs, std::abs(r));
    c.expect(min_abs < 1e-10, "xi=0 zero root off by " + fmt(min_abs));
  }
  c.finish(10);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
