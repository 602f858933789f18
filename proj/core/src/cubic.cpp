#include "virodyn/cubic.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

namespace virodyn {

CubicCoefficients CubicCoefficients::monic() const {
  if (a0 == 0.0) throw std::invalid_argument("cubic leading coefficient is zero");
  return {1.0, a1 / a0, a2 / a0, a3 / a0};
}

std::array<std::complex<double>, 3> cubic_roots(const CubicCoefficients& c) {
  const CubicCoefficients n = c.monic();
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(0, 2) = -n.a3;
  companion(1, 2) = -n.a2;
  companion(2, 2) = -n.a1;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
  std::array<std::complex<double>, 3> roots;
  for (int i = 0; i < 3; ++i) roots[i] = solver.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

double cubic_discriminant(const CubicCoefficients& c) {
  const double a = c.a0, b = c.a1, cc = c.a2, d = c.a3;
  return 18.0 * a * b * cc * d - 4.0 * b * b * b * d + b * b * cc * cc -
         4.0 * a * cc * cc * cc - 27.0 * a * a * d * d;
}

double cubic_eval(const CubicCoefficients& c, double x) {
  return ((c.a0 * x + c.a1) * x + c.a2) * x + c.a3;
}

}  // namespace virodyn
