#ifndef EVAC_EQUITY_HPP_
#define EVAC_EQUITY_HPP_

#include <cstdint>
#include <vector>

namespace evac {

// Per-zone remaining evacuee demand paired with the zone's EPC flag.
struct ZoneDemandSnapshot {
  std::vector<double> demand;
  std::vector<int> epc_flag;
};

// Point-biserial correlation between zone demand and EPC designation:
// (mean_epc - mean_non_epc) / s * sqrt(n_epc * n_non_epc / n^2), with s the
// population standard deviation over all zones. Returns 0 when either group
// is empty or all demands are equal (no disparity is expressible).
// Equals the Pearson correlation of (demand, flag) whenever that is defined.
double point_biserial(const ZoneDemandSnapshot& snapshot);

// |point_biserial| * step_cost.
double inequity_penalty(const ZoneDemandSnapshot& snapshot, double step_cost);

}  // namespace evac

#endif  // EVAC_EQUITY_HPP_
