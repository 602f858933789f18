#ifndef VIRODYN_MODEL_HPP
#define VIRODYN_MODEL_HPP

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

// Gompertz-growth tumour / oncolytic virus model: uninfected cells U,
// infected cells I and viral load V (in cell-equivalent units), with
// frequency-dependent infection UV/(U+I).
namespace virodyn {

inline constexpr const char* kVersion = "0.1.0";

/// Parameters of the dimensional model (rates per unit time, cell counts).
struct DimensionalParams {
  double r;     ///< tumour growth rate
  double K;     ///< carrying capacity
  double beta;  ///< infectivity rate (per virion per time)
  double alpha; ///< burst size (virions per cell)
  double d_I;   ///< infected-cell death rate
  double d_V;   ///< viral decay rate

  /// Throws std::invalid_argument unless all fields are strictly positive.
  void validate() const;
};

/// Dimensionless parameter set. Time is rescaled by beta_hat = beta*alpha,
/// so m = r/beta_hat, xi = d_I/beta_hat, gamma = d_V/beta_hat.
struct ModelParams {
  double m;
  double xi;
  double gamma;
  double K = 100.0;

  void validate() const;
};

/// Population triple at one instant. V is measured in cell-equivalent
/// units (raw virions divided by the burst size).
struct State {
  double U = 0.0;
  double I = 0.0;
  double V = 0.0;

  double total() const { return U + I + V; }
};

enum class EquilibriumKind { FailedTreatment, Coexistence, Eradication };

enum class Classification {
  StableNode,
  StableSpiral,
  UnstableNode,
  UnstableSpiral,
  Saddle,
  Indeterminate,
};

const char* to_string(EquilibriumKind k);
const char* to_string(Classification c);

struct Equilibrium {
  EquilibriumKind kind;
  State state;
  std::array<std::complex<double>, 3> eigenvalues;
  Classification classification = Classification::Indeterminate;
  /// False for the coexistence point when gamma >= 1 (negative I*); the
  /// point is still reported so branches can be continued through gamma=1.
  bool physical = true;
};

/// Right-hand side of the dimensionless model.
/// Throws std::domain_error if U <= 0 or U + I <= 0.
State rhs(const ModelParams& p, const State& s);

/// Right-hand side of the dimensional model; s.V holds raw virions here.
State rhs_dimensional(const DimensionalParams& p, const State& s);

/// Converts dimensional parameters to the dimensionless set.
/// With rescale_by_K the tilde form is produced: K maps to 1 and states
/// must be divided by K accordingly.
ModelParams nondimensionalize(const DimensionalParams& p, bool rescale_by_K = false);

/// Analytic Jacobian of rhs. Throws std::domain_error at U <= 0 or
/// U + I <= 0; the origin must be handled through the eradication probe.
Eigen::Matrix3d jacobian(const ModelParams& p, const State& s);

/// Closed-form coexistence equilibrium (U*, I*, V*). Valid algebra for
/// any gamma > 0; I*, V* are negative when gamma > 1.
State coexistence_state(const ModelParams& p);

/// Eigenvalues of a 3x3 real matrix, sorted by ascending real part.
std::array<std::complex<double>, 3> eigenvalues(const Eigen::Matrix3d& J);

/// Local classification from eigenvalues; Indeterminate when a real part
/// lies within tol of zero.
Classification classify_eigenvalues(const std::array<std::complex<double>, 3>& ev,
                                    double tol = 1e-12);

/// The three equilibria: failed treatment (K,0,0), coexistence and
/// eradication (0,0,0). The eradication entry has a singular Jacobian and
/// carries NaN eigenvalues with Indeterminate classification.
std::vector<Equilibrium> equilibria(const ModelParams& p);

}  // namespace virodyn

#endif
