#ifndef VIRODYN_CSV_HPP
#define VIRODYN_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

#include "virodyn/continuation.hpp"
#include "virodyn/integrator.hpp"
#include "virodyn/protocol.hpp"
#include "virodyn/stability.hpp"

namespace virodyn {

/// Fixed 12-significant-digit rendering: reproducible outputs without
/// printing noise digits.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_events_csv(std::ostream& os, const Trajectory& traj);
void write_region_csv(std::ostream& os, const std::vector<RegionSample>& samples);

struct ContourPoint {
  double m;
  double gamma;
  double U_T;
  double xi;
};
void write_contour_csv(std::ostream& os, const std::vector<ContourPoint>& points);

void write_branch_csv(std::ostream& os, const Branch& branch);
void write_eradication_scan_csv(std::ostream& os, const EradicationScan& scan);
void write_bifurcations_csv(std::ostream& os,
                            const std::vector<BifurcationPoint>& points);
void write_hopf_locus_csv(std::ostream& os, const std::vector<HopfPoint>& locus,
                          ContinuationParam sweep, ContinuationParam solved);
void write_cycles_csv(std::ostream& os,
                      const std::vector<CycleMeasurement>& cycles);
void write_kappa_sweep_csv(std::ostream& os, const KappaSweepResult& sweep);
void write_dosage_sweep_csv(std::ostream& os,
                            const std::vector<DoseRecord>& records);
void write_basin_csv(std::ostream& os, const std::vector<BasinPoint>& points);

}  // namespace virodyn

#endif
