#ifndef VIRODYN_CONTINUATION_HPP
#define VIRODYN_CONTINUATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "virodyn/integrator.hpp"
#include "virodyn/model.hpp"
#include "virodyn/stability.hpp"

namespace virodyn {

enum class ContinuationParam { m, xi, gamma };

const char* to_string(ContinuationParam p);
std::optional<ContinuationParam> parse_continuation_param(const std::string& name);

double get_param(const ModelParams& p, ContinuationParam which);
void set_param(ModelParams& p, ContinuationParam which, double value);

enum class BifurcationKind { Hopf, Fold, BranchPoint, GeneralizedHopf };
enum class Criticality { Supercritical, Subcritical, NotApplicable };

const char* to_string(BifurcationKind k);
const char* to_string(Criticality c);

struct BifurcationPoint {
  BifurcationKind kind;
  ContinuationParam param1;
  double value1;
  /// Second coordinate for points on two-parameter loci.
  std::optional<ContinuationParam> param2;
  double value2 = 0.0;
  Criticality criticality = Criticality::NotApplicable;
  /// Imaginary part of the critical pair at a Hopf point (0 otherwise).
  double omega = 0.0;
};

struct BranchSample {
  double param;
  State state;
  bool stable;
};

struct Branch {
  ContinuationParam param;
  EquilibriumKind kind;
  std::vector<BranchSample> points;
  std::vector<BifurcationPoint> bifurcations;
  /// Set when continuation stopped before covering the requested range
  /// (step underflow or the branch left the physical region).
  bool truncated = false;
  std::string note;
};

struct ContinuationOptions {
  double ds_min = 1e-5;
  double ds_max = 1e-2;
  double ds0 = 1e-3;
  double newton_tol = 1e-10;
  int newton_max_iter = 20;
  int max_points = 200000;
  /// Classify each detected Hopf point by simulation (costs a long
  /// integration per point).
  bool classify_hopf_points = true;
  double hopf_offset = 1e-3;
  double hopf_horizon = 60000.0;
};

/// Pseudo-arclength continuation of an equilibrium branch over
/// [lo, hi] in the chosen parameter, starting from p0. Detects Hopf,
/// Fold, and BranchPoint singularities via test-function sign changes,
/// refined to |delta param| < 1e-6.
Branch continue_equilibrium(const ModelParams& p0, EquilibriumKind which,
                            ContinuationParam param, double lo, double hi,
                            const ContinuationOptions& opts = {});

struct EradicationScan {
  ContinuationParam param;
  /// Pointwise origin-stability verdicts over the sampled range.
  std::vector<std::pair<double, Verdict>> samples;
  /// The stability-change point, refined to |delta param| < tol. Reported
  /// with kind Fold, matching the usual naming for this transition even
  /// though the origin's Jacobian is singular.
  std::optional<BifurcationPoint> fold;
};

/// Stability of the (0,0,0) branch over a parameter range via the
/// dynamic eradication probe, with the flip located by bisection.
EradicationScan eradication_branch_stability(const ModelParams& base,
                                             ContinuationParam param, double lo,
                                             double hi, int n_samples = 17,
                                             double tol = 1e-4,
                                             double probe_horizon = 60000.0);

struct HopfPoint {
  ModelParams params;
  double omega;
  Criticality criticality = Criticality::NotApplicable;
};

/// Solves the Routh-Hurwitz boundary a1 a2 = a0 a3 (with the oscillation
/// side conditions) of the interior-equilibrium cubic for `solve_for`, at
/// each value of the swept parameter, holding the third parameter at its
/// value in `base`. Multiple roots per sweep value are all reported.
std::vector<HopfPoint> hopf_locus(const ModelParams& base,
                                  ContinuationParam sweep,
                                  const std::vector<double>& sweep_values,
                                  ContinuationParam solve_for, double solve_lo,
                                  double solve_hi, int scan_intervals = 400,
                                  bool classify = true);

/// Criticality of a Hopf point by simulation: step the varied parameter
/// slightly into the unstable side, perturb off the equilibrium by
/// 1e-3 K, and watch whether a bounded cycle around the equilibrium
/// appears (Supercritical) or the orbit leaves for another attractor
/// (Subcritical).
Criticality classify_hopf(const ModelParams& at_hopf, ContinuationParam varied,
                          double offset = 1e-3, double horizon = 60000.0);

/// Generalized Hopf point: bisection on the swept parameter between a
/// supercritical and a subcritical locus point, classifying at each
/// midpoint. Returns the located Hopf point with the GH parameter value.
std::optional<BifurcationPoint> generalized_hopf(const ModelParams& base,
                                                 ContinuationParam sweep,
                                                 double sweep_lo, double sweep_hi,
                                                 ContinuationParam solve_for,
                                                 double solve_lo, double solve_hi,
                                                 double tol = 5e-3);

struct CycleMeasurement {
  double param;
  double U_max;
  double U_min;
  double period;
  /// False when peaks were present but failed the 1% convergence test.
  bool converged;
};

/// Limit-cycle amplitude/period over a parameter sweep, by direct
/// simulation from (0.5K, 0.1K, 0.1K) with peak detection. Parameter
/// points without oscillations produce no entry.
std::vector<CycleMeasurement> track_cycles(const ModelParams& base,
                                           ContinuationParam param, double lo,
                                           double hi, double step,
                                           double horizon = 20000.0,
                                           const IntegratorConfig& cfg = {});

}  // namespace virodyn

#endif
