#ifndef VIRODYN_STABILITY_HPP
#define VIRODYN_STABILITY_HPP

#include <optional>
#include <vector>

#include "virodyn/cubic.hpp"
#include "virodyn/integrator.hpp"
#include "virodyn/model.hpp"

namespace virodyn {

/// Characteristic cubic at the failed-treatment point (K, 0, 0):
/// -(l + m)(l^2 + (xi+gamma) l + xi(gamma-1)), leading coefficient -1.
CubicCoefficients charpoly_failed(const ModelParams& p);

/// Characteristic cubic at the interior (coexistence) equilibrium,
/// leading coefficient -1. Roots match the numeric Jacobian eigenvalues
/// at the closed-form equilibrium.
CubicCoefficients charpoly_coexistence(const ModelParams& p);

struct RouthHurwitz {
  bool stable;
  /// True when any test quantity sits within 1e-12 of zero; the verdict is
  /// then a boundary call and should not be trusted on its own.
  bool degenerate;
};

/// Routh-Hurwitz test for a cubic: all roots in the open left half-plane.
/// Coefficients are normalized to a0 = +1 internally, so either sign
/// convention is accepted.
RouthHurwitz routh_hurwitz(const CubicCoefficients& c);

inline bool routh_hurwitz_stable(const CubicCoefficients& c) {
  return routh_hurwitz(c).stable;
}

/// Node/spiral/stability label of the interior equilibrium: stability from
/// Routh-Hurwitz, real-vs-complex split from the cubic discriminant.
/// Indeterminate when the discriminant or a test quantity is within tol of
/// zero (scaled).
Classification classify_coexistence(const ModelParams& p, double tol = 1e-12);

/// Bisects the coexistence-cubic discriminant in xi on [lo, hi]; returns
/// the node/spiral switch point. Throws if the discriminant does not
/// change sign over the bracket.
double node_spiral_switch_xi(double m, double gamma, double K, double lo,
                             double hi, double tol = 1e-10);

enum class Verdict { Stable, Unstable, Indeterminate };

const char* to_string(Verdict v);

struct ProbeResult {
  /// Jacobian eigenvalues at the probe state.
  std::array<std::complex<double>, 3> eigenvalues;
  /// Whether the eigenvalue sign pattern survives rescaling the probe by
  /// 0.1. The origin's Jacobian is singular, so eigenvalues at a finite
  /// probe are only indicative; the verdict below does not rely on them.
  bool eigenvalues_consistent;
  /// Stability of the origin as an attractor, decided dynamically: a
  /// reference orbit either collapses into the absorbing origin (Stable)
  /// or dips and rebounds / never approaches (Unstable).
  Verdict verdict;
  State probe;
};

/// A small state representing an orbit deep in its collapse toward the
/// origin, scaled to the carrying capacity. The component ratios sit on
/// the slow approach manifold ln(K/U) = (V/I)/(m + xi - gamma) of the
/// near-onset regime, which is where linearized eigenvalues at a finite
/// probe are meaningful at all.
State approach_state(const ModelParams& p, double U_frac = 6.257e-8,
                     double I_frac = 4.92e-5, double ratio = 1.5756);

/// Stability test for the singular eradication equilibrium (0,0,0).
/// Eigenvalues come from the Jacobian at `probe` (default: approach_state);
/// the verdict comes from integrating a macroscopic reference orbit and
/// watching whether the origin captures it.
ProbeResult eradication_probe(const ModelParams& p,
                              std::optional<State> probe = std::nullopt,
                              double horizon = 60000.0);

/// xi placing the interior equilibrium at tumour burden U_T, i.e. the
/// inversion of U* = K exp(xi (gamma-1)/(m gamma)):
/// xi = m gamma ln(U_T/K) / (gamma - 1).
double threshold_contour(double m, double gamma, double K, double U_T);

struct RegionSample {
  ModelParams params;
  bool stable;
  Classification classification;
  double Ustar;
  /// True on Routh-Hurwitz or discriminant boundary cases.
  bool degenerate;
  /// False when gamma >= 1 (interior equilibrium non-physical).
  bool physical;
};

/// Evaluates stability and classification of the interior equilibrium over
/// the tensor grid, row-major in (m, xi, gamma).
std::vector<RegionSample> scan_region(const std::vector<double>& m_values,
                                      const std::vector<double>& xi_values,
                                      const std::vector<double>& gamma_values,
                                      double K = 100.0);

}  // namespace virodyn

#endif
