#ifndef VIRODYN_CUBIC_HPP
#define VIRODYN_CUBIC_HPP

#include <array>
#include <complex>

namespace virodyn {

/// Coefficients of rho(lambda) = a0 l^3 + a1 l^2 + a2 l + a3, a0 != 0.
struct CubicCoefficients {
  double a0;
  double a1;
  double a2;
  double a3;

  /// Same polynomial with a0 normalized to +1.
  CubicCoefficients monic() const;
};

/// Roots via the companion-matrix eigenvalue method (robust near repeated
/// roots), sorted by ascending real part.
std::array<std::complex<double>, 3> cubic_roots(const CubicCoefficients& c);

/// Discriminant 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2 for
/// a x^3 + b x^2 + c x + d. Positive: three distinct real roots;
/// negative: one real root and a complex pair.
double cubic_discriminant(const CubicCoefficients& c);

/// Evaluates rho(x) for real x (Horner).
double cubic_eval(const CubicCoefficients& c, double x);

}  // namespace virodyn

#endif
