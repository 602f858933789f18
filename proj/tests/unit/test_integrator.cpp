#include <cmath>

#include "doctest.h"
#include "virodyn/integrator.hpp"

using namespace virodyn;

namespace {
const ModelParams kBase{0.1, 0.01, 0.1, 100.0};
}

TEST_CASE("schedule times and dose split") {
  InjectionSchedule s;
  s.D0 = 30.0;
  s.n = 3;
  s.kappa = 25.0;
  s.t0 = 10.0;
  CHECK(s.dose_per_injection() == doctest::Approx(10.0));
  const auto t = s.times();
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(10.0));
  CHECK(t[1] == doctest::Approx(35.0));
  CHECK(t[2] == doctest::Approx(60.0));

  InjectionSchedule bad = s;
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.kappa = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("injections land exactly and conserve total dose") {
  InjectionSchedule s;
  s.D0 = 40.0;
  s.n = 4;
  s.kappa = 17.3;
  s.t0 = 3.1;
  const Trajectory traj = integrate(kBase, {50.0, 10.0, 10.0}, 200.0, {}, &s);
  REQUIRE(traj.events.size() == 4);
  double injected = 0.0;
  for (std::size_t i = 0; i < traj.events.size(); ++i) {
    const InjectionEvent& e = traj.events[i];
    CHECK(e.t == doctest::Approx(3.1 + 17.3 * i).epsilon(1e-14));
    CHECK(e.V_post - e.V_pre == doctest::Approx(10.0).epsilon(1e-15));
    injected += e.V_post - e.V_pre;
  }
  CHECK(injected == doctest::Approx(40.0).epsilon(1e-15));
  // the sampled trajectory contains the event times
  for (const InjectionEvent& e : traj.events) {
    bool found = false;
    for (double t : traj.times) {
      if (t == e.t) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("convergence to the coexistence equilibrium") {
  const Trajectory traj = integrate(kBase, {50.0, 10.0, 10.0}, 20000.0);
  const State& last = traj.back();
  CHECK(last.U == doctest::Approx(40.657).epsilon(1e-3));
  CHECK(last.I == doctest::Approx(365.913).epsilon(1e-3));
  CHECK(last.V == doctest::Approx(36.5913).epsilon(1e-3));
}

TEST_CASE("absorbing origin") {
  ModelParams p = kBase;
  p.xi = 0.12;
  const Trajectory traj = integrate(p, {50.0, 10.0, 10.0}, 20000.0);
  CHECK(traj.absorbed);
  CHECK(traj.back().U == 0.0);
  CHECK(traj.back().I == 0.0);
  CHECK(traj.back().V == 0.0);
  CHECK(traj.absorbed_time < 20000.0);
  // absorbed runs stop sampling
  CHECK(traj.times.back() == doctest::Approx(traj.absorbed_time));
}

TEST_CASE("positive floor clamps small components") {
  IntegratorConfig cfg;
  cfg.floor = 1e-6;
  ModelParams p = kBase;
  p.xi = 0.06;
  const Trajectory traj = integrate(p, {50.0, 10.0, 10.0}, 5000.0, cfg);
  for (const State& s : traj.states) {
    CHECK((s.U == 0.0 || s.U >= 1e-6));
    CHECK((s.I == 0.0 || s.I >= 1e-6));
    CHECK((s.V == 0.0 || s.V >= 1e-6));
  }
}

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.rel_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.floor = -1e-3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("peak detection with hysteresis") {
  std::vector<double> t, clean, noisy;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i * 0.05;
    t.push_back(x);
    clean.push_back(std::sin(x));
    // alternating sample jitter large enough to flip local orderings
    noisy.push_back(std::sin(x) + (i % 2 ? 0.01 : 0.0));
  }

  const auto peaks = find_peaks(t, clean, 1e-2);
  REQUIRE(peaks.size() == 8);  // sin has 8 maxima on [0, 50]
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const double expected = 0.5 * M_PI + 2.0 * M_PI * i;
    CHECK(peaks[i].t == doctest::Approx(expected).epsilon(1e-3));
    CHECK(peaks[i].value == doctest::Approx(1.0).epsilon(1e-4));
  }

  // hysteresis suppresses the jitter; without it every wiggle counts
  CHECK(find_peaks(t, noisy, 0.05).size() == 8);
  CHECK(find_peaks(t, noisy, 0.0).size() > 8);
}

TEST_CASE("outcome classification of the four regimes") {
  ModelParams p = kBase;

  p.xi = 0.01;
  OutcomeReport rep = integrate_to_outcome(p, {50.0, 10.0, 10.0}, {}, 20000.0);
  CHECK(rep.outcome == Outcome::Coexistence);
  CHECK(rep.final_state.U == doctest::Approx(40.657).epsilon(1e-3));

  p.xi = 0.06;
  rep = integrate_to_outcome(p, {50.0, 10.0, 10.0}, {}, 20000.0);
  CHECK(rep.outcome == Outcome::LimitCycle);
  REQUIRE(rep.cycle.has_value());
  CHECK(rep.cycle->U_max == doctest::Approx(75.154).epsilon(1e-2));
  CHECK(rep.cycle->period == doctest::Approx(248.33).epsilon(1e-2));

  p.xi = 0.12;
  rep = integrate_to_outcome(p, {50.0, 10.0, 10.0}, {}, 20000.0);
  CHECK(rep.outcome == Outcome::Eradication);
}

TEST_CASE("failed treatment detected when the virus dies out") {
  // gamma > 1: infection cannot sustain itself, tumour returns to K
  const ModelParams p{0.1, 0.2, 1.5, 100.0};
  const OutcomeReport rep = integrate_to_outcome(p, {50.0, 1.0, 1.0}, {}, 20000.0);
  CHECK(rep.outcome == Outcome::FailedTreatment);
  CHECK(rep.final_state.U == doctest::Approx(100.0).epsilon(1e-3));
}

TEST_CASE("integration requires nonnegative initial components") {
  CHECK_THROWS_AS(integrate(kBase, {-1.0, 10.0, 10.0}, 10.0),
                  std::domain_error);
  CHECK_THROWS_AS(integrate(kBase, {50.0, -1.0, 10.0}, 10.0),
                  std::domain_error);
}
