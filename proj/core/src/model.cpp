#include "virodyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace virodyn {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be strictly positive");
  }
}

void check_interior(const State& s) {
  if (!(s.U > 0.0)) {
    throw std::domain_error("rhs/jacobian undefined for U <= 0 (log singularity)");
  }
  if (!(s.U + s.I > 0.0)) {
    throw std::domain_error("rhs/jacobian undefined for U + I <= 0");
  }
}

}  // namespace

void DimensionalParams::validate() const {
  require_positive(r, "r");
  require_positive(K, "K");
  require_positive(beta, "beta");
  require_positive(alpha, "alpha");
  require_positive(d_I, "d_I");
  require_positive(d_V, "d_V");
}

void ModelParams::validate() const {
  require_positive(m, "m");
  require_positive(xi, "xi");
  require_positive(gamma, "gamma");
  require_positive(K, "K");
}

const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::FailedTreatment: return "FailedTreatment";
    case EquilibriumKind::Coexistence: return "Coexistence";
    case EquilibriumKind::Eradication: return "Eradication";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::StableNode: return "StableNode";
    case Classification::StableSpiral: return "StableSpiral";
    case Classification::UnstableNode: return "UnstableNode";
    case Classification::UnstableSpiral: return "UnstableSpiral";
    case Classification::Saddle: return "Saddle";
    case Classification::Indeterminate: return "Indeterminate";
  }
  return "?";
}

State rhs(const ModelParams& p, const State& s) {
  check_interior(s);
  const double infection = s.U * s.V / (s.U + s.I);
  State d;
  d.U = p.m * std::log(p.K / s.U) * s.U - infection;
  d.I = infection - p.xi * s.I;
  d.V = -p.gamma * s.V + p.xi * s.I;
  return d;
}

State rhs_dimensional(const DimensionalParams& p, const State& s) {
  check_interior(s);
  const double infection = p.beta * s.U * s.V / (s.U + s.I);
  State d;
  d.U = p.r * std::log(p.K / s.U) * s.U - infection;
  d.I = infection - p.d_I * s.I;
  d.V = -p.d_V * s.V + p.alpha * p.d_I * s.I;
  return d;
}

ModelParams nondimensionalize(const DimensionalParams& p, bool rescale_by_K) {
  p.validate();
  const double beta_hat = p.beta * p.alpha;
  ModelParams q;
  q.m = p.r / beta_hat;
  q.xi = p.d_I / beta_hat;
  q.gamma = p.d_V / beta_hat;
  q.K = rescale_by_K ? 1.0 : p.K;
  return q;
}

Eigen::Matrix3d jacobian(const ModelParams& p, const State& s) {
  check_interior(s);
  const double S = s.U + s.I;
  const double S2 = S * S;
  Eigen::Matrix3d J;
  J(0, 0) = p.m * std::log(p.K / s.U) - p.m - s.V * s.I / S2;
  J(0, 1) = s.U * s.V / S2;
  J(0, 2) = -s.U / S;
  J(1, 0) = s.V * s.I / S2;
  J(1, 1) = -p.xi - s.U * s.V / S2;
  J(1, 2) = s.U / S;
  J(2, 0) = 0.0;
  J(2, 1) = p.xi;
  J(2, 2) = -p.gamma;
  return J;
}

State coexistence_state(const ModelParams& p) {
  State s;
  s.U = p.K * std::exp(p.xi * (p.gamma - 1.0) / (p.m * p.gamma));
  s.I = s.U * (1.0 - p.gamma) / p.gamma;
  s.V = p.xi * s.I / p.gamma;
  return s;
}

std::array<std::complex<double>, 3> eigenvalues(const Eigen::Matrix3d& J) {
  Eigen::EigenSolver<Eigen::Matrix3d> solver(J);
  std::array<std::complex<double>, 3> ev;
  for (int i = 0; i < 3; ++i) ev[i] = solver.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

Classification classify_eigenvalues(const std::array<std::complex<double>, 3>& ev,
                                    double tol) {
  int neg = 0, pos = 0;
  bool complex_pair = false;
  for (const auto& l : ev) {
    if (std::abs(l.imag()) > tol) complex_pair = true;
    if (std::abs(l.real()) <= tol) return Classification::Indeterminate;
    (l.real() < 0.0 ? neg : pos)++;
  }
  if (neg == 3) return complex_pair ? Classification::StableSpiral : Classification::StableNode;
  if (pos == 3) return complex_pair ? Classification::UnstableSpiral : Classification::UnstableNode;
  // Mixed signs: a complex pair against a real eigenvalue still spirals
  // locally, but we keep the conventional saddle label for all-real sets.
  return complex_pair ? (pos >= 2 ? Classification::UnstableSpiral
                                  : Classification::Saddle)
                      : Classification::Saddle;
}

std::vector<Equilibrium> equilibria(const ModelParams& p) {
  p.validate();
  std::vector<Equilibrium> out;

  Equilibrium failed;
  failed.kind = EquilibriumKind::FailedTreatment;
  failed.state = State{p.K, 0.0, 0.0};
  failed.eigenvalues = eigenvalues(jacobian(p, failed.state));
  failed.classification = classify_eigenvalues(failed.eigenvalues);
  out.push_back(failed);

  Equilibrium coex;
  coex.kind = EquilibriumKind::Coexistence;
  coex.state = coexistence_state(p);
  coex.physical = p.gamma < 1.0;
  if (coex.state.U + coex.state.I > 0.0 && coex.state.U > 0.0) {
    coex.eigenvalues = eigenvalues(jacobian(p, coex.state));
    coex.classification = classify_eigenvalues(coex.eigenvalues);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    coex.eigenvalues = {std::complex<double>(nan), std::complex<double>(nan),
                        std::complex<double>(nan)};
    coex.classification = Classification::Indeterminate;
  }
  out.push_back(coex);

  Equilibrium erad;
  erad.kind = EquilibriumKind::Eradication;
  erad.state = State{0.0, 0.0, 0.0};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  erad.eigenvalues = {std::complex<double>(nan), std::complex<double>(nan),
                      std::complex<double>(nan)};
  erad.classification = Classification::Indeterminate;
  out.push_back(erad);

  return out;
}

}  // namespace virodyn
