#include <cmath>

#include "doctest.h"
#include "virodyn/continuation.hpp"

using namespace virodyn;

namespace {
const ModelParams kBase{0.1, 0.01, 0.1, 100.0};

const BifurcationPoint* find_kind(const std::vector<BifurcationPoint>& pts,
                                  BifurcationKind k) {
  for (const auto& p : pts) {
    if (p.kind == k) return &p;
  }
  return nullptr;
}
}  // namespace

TEST_CASE("parameter name round trip") {
  for (auto p : {ContinuationParam::m, ContinuationParam::xi, ContinuationParam::gamma}) {
    const auto back = parse_continuation_param(to_string(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK_FALSE(parse_continuation_param("K").has_value());
  ModelParams q = kBase;
  set_param(q, ContinuationParam::gamma, 0.3);
  CHECK(get_param(q, ContinuationParam::gamma) == doctest::Approx(0.3));
}

TEST_CASE("coexistence branch in xi tracks the closed form") {
  const Branch b = continue_equilibrium(kBase, EquilibriumKind::Coexistence,
                                        ContinuationParam::xi, 0.005, 0.2);
  CHECK_FALSE(b.points.empty());
  CHECK(b.points.front().param <= 0.006);
  CHECK(b.points.back().param >= 0.199);
  for (std::size_t i = 0; i < b.points.size(); i += 50) {
    ModelParams q = kBase;
    q.xi = b.points[i].param;
    const State star = coexistence_state(q);
    CHECK(b.points[i].state.U == doctest::Approx(star.U).epsilon(1e-6));
    CHECK(b.points[i].state.I == doctest::Approx(star.I).epsilon(1e-6));
  }
}

TEST_CASE("Hopf detection on the xi branch") {
  const Branch b = continue_equilibrium(kBase, EquilibriumKind::Coexistence,
                                        ContinuationParam::xi, 0.005, 0.2);
  const BifurcationPoint* hopf = find_kind(b.bifurcations, BifurcationKind::Hopf);
  REQUIRE(hopf != nullptr);
  CHECK(hopf->value1 == doctest::Approx(0.0429).epsilon(2e-2));
  CHECK(hopf->criticality == Criticality::Supercritical);
  CHECK(hopf->omega == doctest::Approx(0.0399).epsilon(1e-2));
  // stability flips across the Hopf
  bool saw_stable = false, saw_unstable = false;
  for (const auto& s : b.points) {
    if (s.param < hopf->value1 - 1e-3 && s.stable) saw_stable = true;
    if (s.param > hopf->value1 + 1e-3 && !s.stable) saw_unstable = true;
  }
  CHECK(saw_stable);
  CHECK(saw_unstable);
}

TEST_CASE("subcritical Hopf at larger growth rate") {
  ModelParams p = kBase;
  p.m = 0.5;
  const Branch b = continue_equilibrium(p, EquilibriumKind::Coexistence,
                                        ContinuationParam::xi, 0.1, 0.2);
  const BifurcationPoint* hopf = find_kind(b.bifurcations, BifurcationKind::Hopf);
  REQUIRE(hopf != nullptr);
  CHECK(hopf->value1 == doctest::Approx(0.1388).epsilon(2e-2));
  CHECK(hopf->criticality == Criticality::Subcritical);
}

TEST_CASE("eradication branch stability flip in xi") {
  const EradicationScan scan = eradication_branch_stability(
      kBase, ContinuationParam::xi, 0.05, 0.15, 11);
  REQUIRE(scan.fold.has_value());
  CHECK(scan.fold->value1 == doctest::Approx(0.0973).epsilon(2e-2));
  // verdicts flip from unstable to stable across the fold
  CHECK(scan.samples.front().second == Verdict::Unstable);
  CHECK(scan.samples.back().second == Verdict::Stable);
}

TEST_CASE("eradication branch stability flip in gamma") {
  ModelParams p = kBase;
  p.gamma = 0.05;
  const EradicationScan scan = eradication_branch_stability(
      p, ContinuationParam::gamma, 0.005, 0.05, 10);
  REQUIRE(scan.fold.has_value());
  CHECK(scan.fold->value1 == doctest::Approx(0.0103).epsilon(0.1));
}

TEST_CASE("hopf locus criticality split and GH bracket") {
  auto locus = hopf_locus(kBase, ContinuationParam::m, {0.1, 0.5},
                          ContinuationParam::xi, 1e-4, 1.0);
  REQUIRE(locus.size() == 2);
  CHECK(locus[0].params.xi == doctest::Approx(0.0429).epsilon(1e-2));
  CHECK(locus[0].criticality == Criticality::Supercritical);
  CHECK(locus[1].params.xi == doctest::Approx(0.1388).epsilon(1e-2));
  CHECK(locus[1].criticality == Criticality::Subcritical);

  const auto gh = generalized_hopf(kBase, ContinuationParam::m, 0.1, 0.5,
                                   ContinuationParam::xi, 1e-4, 1.0);
  REQUIRE(gh.has_value());
  CHECK(gh->kind == BifurcationKind::GeneralizedHopf);
  CHECK(gh->value1 > 0.1);
  CHECK(gh->value1 < 0.5);
}

TEST_CASE("cycle amplitude grows and period lengthens with xi") {
  const auto cycles =
      track_cycles(kBase, ContinuationParam::xi, 0.05, 0.09, 0.01);
  REQUIRE(cycles.size() >= 4);
  for (std::size_t i = 1; i < cycles.size(); ++i) {
    CHECK(cycles[i].U_max > cycles[i - 1].U_max);
    CHECK(cycles[i].U_min < cycles[i - 1].U_min);
    CHECK(cycles[i].period > cycles[i - 1].period);
  }
}

TEST_CASE("zero-root branch points at gamma=1 and xi=0") {
  // At gamma = 1 the interior equilibrium meets (K,0,0) and the
  // characteristic cubic gains an exact zero root.
  ModelParams p = kBase;
  p.gamma = 1.0;
  const CubicCoefficients cg = charpoly_coexistence(p).monic();
  CHECK(std::abs(cg.a3) < 1e-10);
  const auto roots = cubic_roots(cg);
  double min_abs = 1e300;
  for (const auto& r : roots) min_abs = std::min(min_abs, std::abs(r));
  CHECK(min_abs < 1e-10);

  const CubicCoefficients cf = charpoly_failed(p).monic();
  CHECK(std::abs(cf.a3) < 1e-10);

  // xi -> 0 removes the infection sink and also zeroes the product of roots
  ModelParams p0 = kBase;
  p0.xi = 1e-300;
  CHECK(std::abs(charpoly_coexistence(p0).monic().a3) < 1e-10);
}
