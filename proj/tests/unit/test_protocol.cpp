#include <cmath>

#include "doctest.h"
#include "virodyn/protocol.hpp"

using namespace virodyn;

namespace {
const ModelParams kCycle{0.2, 0.06915, 0.1, 100.0};
const ModelParams kBistable{0.5, 0.138, 0.1, 100.0};
}

TEST_CASE("run_protocol rejects impossible schedules") {
  InjectionSchedule s;
  s.D0 = 10.0;
  s.n = 2;
  s.kappa = 600.0;
  CHECK_THROWS_AS(run_protocol(kCycle, {50.0, 10.0, 10.0}, s, 500.0),
                  std::invalid_argument);

  IntegratorConfig cfg;
  cfg.floor = 1.0;
  InjectionSchedule tiny;
  tiny.D0 = 0.5;
  tiny.n = 1;
  CHECK_THROWS_AS(run_protocol(kCycle, {50.0, 10.0, 10.0}, tiny, 500.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("protocol dose accounting and post-injection extrema") {
  InjectionSchedule s;
  s.D0 = 20.0;
  s.n = 2;
  s.kappa = 30.0;
  const ProtocolResult res = run_protocol(kCycle, {50.0, 10.0, 10.0}, s, 3000.0);
  REQUIRE(res.trajectory.events.size() == 2);
  double total = 0.0;
  for (const auto& e : res.trajectory.events) total += e.V_post - e.V_pre;
  CHECK(total == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(res.post_max_U > res.post_min_U);
  CHECK(res.post_max_U <= res.report.max_U);
}

TEST_CASE("kappa sweep stays on the limit cycle") {
  const KappaSweepResult sweep = kappa_sweep(kCycle, 20.0, 2, 20.0, 60.0, 3);
  CHECK(sweep.baseline_period == doctest::Approx(109.1).epsilon(1e-2));
  CHECK(sweep.baseline_U_max == doctest::Approx(8.09).epsilon(5e-2));
  REQUIRE(sweep.records.size() == 3);
  for (const auto& r : sweep.records) {
    CHECK(r.outcome == Outcome::LimitCycle);
    CHECK(r.max_U > sweep.baseline_U_max);  // injections kick the transient up
    CHECK(r.max_V > 0.0);
  }
}

TEST_CASE("kappa sweep requires an oscillatory baseline") {
  // stable-equilibrium parameters: no baseline cycle to perturb
  const ModelParams quiet{0.1, 0.01, 0.1, 100.0};
  CHECK_THROWS_AS(kappa_sweep(quiet, 20.0, 2, 20.0, 60.0, 3), std::runtime_error);
}

TEST_CASE("dosage sweep interval structure in the bistable window") {
  const auto records = dosage_sweep(kBistable, 50.0, 10.0, 20.0, 200.0, 19);
  REQUIRE(records.size() == 19);
  CHECK(records.front().outcome == Outcome::Eradication);
  CHECK(records.back().outcome == Outcome::Eradication);
  int transitions = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].outcome != records[i - 1].outcome) ++transitions;
  }
  CHECK(transitions == 2);
  bool has_coexistence = false;
  for (const auto& r : records) {
    if (r.outcome == Outcome::Coexistence) has_coexistence = true;
  }
  CHECK(has_coexistence);
}

TEST_CASE("basin slice labels and determinism") {
  ModelParams p = kBistable;
  p.xi = 0.136;
  const std::vector<double> U0{40.0, 60.0};
  const std::vector<double> V0{5.0, 40.0};
  const auto a = basin_slice(p, U0, V0, 10.0);
  REQUIRE(a.size() == 4);
  // row-major in (U0, V0)
  CHECK(a[0].U0 == doctest::Approx(40.0));
  CHECK(a[0].V0 == doctest::Approx(5.0));
  CHECK(a[0].outcome == Outcome::Eradication);
  CHECK(a[3].U0 == doctest::Approx(60.0));
  CHECK(a[3].outcome == Outcome::Coexistence);

  const auto b = basin_slice(p, U0, V0, 10.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].outcome == b[i].outcome);
}
