#include "virodyn/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace virodyn {

CubicCoefficients charpoly_failed(const ModelParams& p) {
  // -(l + m)(l^2 + (xi + gamma) l + xi (gamma - 1))
  CubicCoefficients c;
  c.a0 = -1.0;
  c.a1 = -(p.xi + p.gamma + p.m);
  c.a2 = -(p.xi * (p.gamma - 1.0) + p.m * (p.xi + p.gamma));
  c.a3 = -p.m * p.xi * (p.gamma - 1.0);
  return c;
}

CubicCoefficients charpoly_coexistence(const ModelParams& p) {
  CubicCoefficients c;
  c.a0 = -1.0;
  c.a1 = -(p.gamma + p.m + p.xi);
  c.a2 = p.gamma * p.m * (p.xi - 1.0) + p.xi * p.xi / p.gamma -
         p.xi * (2.0 * p.m + p.xi);
  c.a3 = p.gamma * p.m * p.xi * (p.gamma - 1.0);
  return c;
}

RouthHurwitz routh_hurwitz(const CubicCoefficients& c) {
  const CubicCoefficients n = c.monic();
  const double b1 = n.a1, b2 = n.a2, b3 = n.a3;
  const double h = b1 * b2 - b3;
  RouthHurwitz rh;
  rh.stable = b1 > 0.0 && b3 > 0.0 && h > 0.0;
  rh.degenerate =
      std::abs(b1) < 1e-12 || std::abs(b3) < 1e-12 || std::abs(h) < 1e-12;
  return rh;
}

Classification classify_coexistence(const ModelParams& p, double tol) {
  const CubicCoefficients c = charpoly_coexistence(p);
  const RouthHurwitz rh = routh_hurwitz(c);
  const double disc = cubic_discriminant(c);
  if (rh.degenerate || std::abs(disc) <= tol) return Classification::Indeterminate;
  if (disc > 0.0) {
    // Three distinct real roots.
    if (rh.stable) return Classification::StableNode;
    const auto roots = cubic_roots(c);
    int pos = 0;
    for (const auto& r : roots) {
      if (r.real() > 0.0) ++pos;
    }
    return pos == 3 ? Classification::UnstableNode : Classification::Saddle;
  }
  return rh.stable ? Classification::StableSpiral : Classification::UnstableSpiral;
}

double node_spiral_switch_xi(double m, double gamma, double K, double lo,
                             double hi, double tol) {
  auto disc_at = [&](double xi) {
    return cubic_discriminant(charpoly_coexistence({m, xi, gamma, K}));
  };
  double flo = disc_at(lo), fhi = disc_at(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("discriminant does not change sign on the bracket");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = disc_at(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

State approach_state(const ModelParams& p, double U_frac, double I_frac,
                     double ratio) {
  State s;
  s.U = U_frac * p.K;
  s.I = I_frac * p.K;
  s.V = ratio * s.I;
  return s;
}

namespace {

bool sign_pattern_matches(const std::array<std::complex<double>, 3>& a,
                          const std::array<std::complex<double>, 3>& b) {
  for (int i = 0; i < 3; ++i) {
    if ((a[i].real() > 0.0) != (b[i].real() > 0.0)) return false;
  }
  return true;
}

}  // namespace

ProbeResult eradication_probe(const ModelParams& p, std::optional<State> probe,
                              double horizon) {
  p.validate();
  ProbeResult res;
  res.probe = probe.value_or(approach_state(p));
  res.eigenvalues = eigenvalues(jacobian(p, res.probe));
  const State scaled{res.probe.U * 0.1, res.probe.I * 0.1, res.probe.V * 0.1};
  res.eigenvalues_consistent =
      sign_pattern_matches(res.eigenvalues, eigenvalues(jacobian(p, scaled)));

  // Dynamic verdict: launch a macroscopic reference orbit and watch whether
  // the origin captures it. A dip below dip_level followed by a rebound
  // above rebound_level rules capture out; hitting the absorbing threshold
  // rules it in.
  const double dip_level = 1e-5 * p.K;
  const double rebound_level = 1e-2 * p.K;
  const double chunk = 5000.0;
  IntegratorConfig cfg;
  State y{0.4 * p.K, 0.1 * p.K, 0.05 * p.K};
  bool dipped = false;
  double t = 0.0;
  res.verdict = Verdict::Indeterminate;
  while (t < horizon) {
    const double span = std::min(chunk, horizon - t);
    Trajectory traj = integrate(p, y, span, cfg);
    for (const State& s : traj.states) {
      const double tot = s.total();
      if (tot < dip_level) dipped = true;
      if (dipped && tot > rebound_level) {
        res.verdict = Verdict::Unstable;
        return res;
      }
    }
    if (traj.absorbed) {
      res.verdict = Verdict::Stable;
      return res;
    }
    y = traj.back();
    t += span;
  }
  // Horizon exhausted: an orbit that never came near the origin is simply
  // not attracted to it; one stuck mid-collapse stays Indeterminate.
  if (!dipped) res.verdict = Verdict::Unstable;
  return res;
}

double threshold_contour(double m, double gamma, double K, double U_T) {
  if (!(gamma > 0.0) || gamma == 1.0) {
    throw std::domain_error("threshold_contour requires gamma > 0, gamma != 1");
  }
  if (!(U_T > 0.0) || !(U_T < K)) {
    throw std::domain_error("threshold_contour requires 0 < U_T < K");
  }
  return m * gamma * std::log(U_T / K) / (gamma - 1.0);
}

std::vector<RegionSample> scan_region(const std::vector<double>& m_values,
                                      const std::vector<double>& xi_values,
                                      const std::vector<double>& gamma_values,
                                      double K) {
  std::vector<RegionSample> out;
  out.reserve(m_values.size() * xi_values.size() * gamma_values.size());
  for (double m : m_values) {
    for (double xi : xi_values) {
      for (double gamma : gamma_values) {
        ModelParams p{m, xi, gamma, K};
        p.validate();
        RegionSample s;
        s.params = p;
        const CubicCoefficients c = charpoly_coexistence(p);
        const RouthHurwitz rh = routh_hurwitz(c);
        s.stable = rh.stable;
        s.degenerate = rh.degenerate ||
                       std::abs(cubic_discriminant(c)) <= 1e-12;
        s.classification = classify_coexistence(p);
        s.Ustar = coexistence_state(p).U;
        s.physical = gamma < 1.0;
        out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace virodyn
