#include "virodyn/csv.hpp"

#include <cstdio>

namespace virodyn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string f(double v) { return format_double(v); }

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,U,I,V\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const State& s = traj.states[i];
    os << f(traj.times[i]) << ',' << f(s.U) << ',' << f(s.I) << ',' << f(s.V)
       << '\n';
  }
}

void write_events_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,dose\n";
  for (const InjectionEvent& e : traj.events) {
    os << f(e.t) << ',' << f(e.dose) << '\n';
  }
}

void write_region_csv(std::ostream& os, const std::vector<RegionSample>& samples) {
  os << "m,xi,gamma,stable,class,Ustar\n";
  for (const RegionSample& s : samples) {
    os << f(s.params.m) << ',' << f(s.params.xi) << ',' << f(s.params.gamma)
       << ',' << (s.stable ? 1 : 0) << ',' << to_string(s.classification) << ','
       << f(s.Ustar) << '\n';
  }
}

void write_contour_csv(std::ostream& os, const std::vector<ContourPoint>& points) {
  os << "m,gamma,U_T,xi\n";
  for (const ContourPoint& p : points) {
    os << f(p.m) << ',' << f(p.gamma) << ',' << f(p.U_T) << ',' << f(p.xi)
       << '\n';
  }
}

void write_branch_csv(std::ostream& os, const Branch& branch) {
  os << "param,U,I,V,stable\n";
  for (const BranchSample& s : branch.points) {
    os << f(s.param) << ',' << f(s.state.U) << ',' << f(s.state.I) << ','
       << f(s.state.V) << ',' << (s.stable ? 1 : 0) << '\n';
  }
}

void write_eradication_scan_csv(std::ostream& os, const EradicationScan& scan) {
  os << "param,U,I,V,stable\n";
  for (const auto& [value, verdict] : scan.samples) {
    os << f(value) << ",0,0,0,"
       << (verdict == Verdict::Stable
               ? "1"
               : (verdict == Verdict::Unstable ? "0" : "indeterminate"))
       << '\n';
  }
}

void write_bifurcations_csv(std::ostream& os,
                            const std::vector<BifurcationPoint>& points) {
  os << "kind,param1,value1,param2,value2,criticality\n";
  for (const BifurcationPoint& bp : points) {
    os << to_string(bp.kind) << ',' << to_string(bp.param1) << ','
       << f(bp.value1) << ',';
    if (bp.param2) {
      os << to_string(*bp.param2) << ',' << f(bp.value2);
    } else {
      os << ",";
    }
    os << ',' << to_string(bp.criticality) << '\n';
  }
}

void write_hopf_locus_csv(std::ostream& os, const std::vector<HopfPoint>& locus,
                          ContinuationParam sweep, ContinuationParam solved) {
  os << to_string(sweep) << ',' << to_string(solved) << ",omega,criticality\n";
  for (const HopfPoint& hp : locus) {
    os << f(get_param(hp.params, sweep)) << ',' << f(get_param(hp.params, solved))
       << ',' << f(hp.omega) << ',' << to_string(hp.criticality) << '\n';
  }
}

void write_cycles_csv(std::ostream& os,
                      const std::vector<CycleMeasurement>& cycles) {
  os << "param,Umax,Umin,period\n";
  for (const CycleMeasurement& c : cycles) {
    os << f(c.param) << ',' << f(c.U_max) << ',' << f(c.U_min) << ','
       << f(c.period) << '\n';
  }
}

void write_kappa_sweep_csv(std::ostream& os, const KappaSweepResult& sweep) {
  os << "kappa,maxU,minU,maxV\n";
  for (const KappaRecord& r : sweep.records) {
    os << f(r.kappa) << ',' << f(r.max_U) << ',' << f(r.min_U) << ','
       << f(r.max_V) << '\n';
  }
}

void write_dosage_sweep_csv(std::ostream& os,
                            const std::vector<DoseRecord>& records) {
  os << "V0,outcome,finalU,finalI,finalV\n";
  for (const DoseRecord& r : records) {
    os << f(r.V0) << ',' << to_string(r.outcome) << ',' << f(r.final_state.U)
       << ',' << f(r.final_state.I) << ',' << f(r.final_state.V) << '\n';
  }
}

void write_basin_csv(std::ostream& os, const std::vector<BasinPoint>& points) {
  os << "U0,V0,outcome\n";
  for (const BasinPoint& p : points) {
    os << f(p.U0) << ',' << f(p.V0) << ',' << to_string(p.outcome) << '\n';
  }
}

}  // namespace virodyn
