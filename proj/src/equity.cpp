#include "evac/equity.hpp"

#include <cmath>
#include <cstddef>

#include "evac/errors.hpp"

namespace evac {

double point_biserial(const ZoneDemandSnapshot& snapshot) {
  const std::size_t n = snapshot.demand.size();
  if (n == 0 || snapshot.epc_flag.size() != n) {
    throw ContractError("point_biserial: snapshot must be nonempty and consistent");
  }

  double sum_e = 0.0, sum_ne = 0.0;
  std::size_t n_e = 0, n_ne = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (snapshot.demand[i] < 0.0) throw ContractError("point_biserial: negative demand");
    if (snapshot.epc_flag[i]) {
      sum_e += snapshot.demand[i];
      ++n_e;
    } else {
      sum_ne += snapshot.demand[i];
      ++n_ne;
    }
  }
  if (n_e == 0 || n_ne == 0) return 0.0;

  const double mean = (sum_e + sum_ne) / static_cast<double>(n);
  double var = 0.0;
  for (const double d : snapshot.demand) {
    const double dev = d - mean;
    var += dev * dev;
  }
  var /= static_cast<double>(n);
  if (var <= 0.0) return 0.0;

  const double mean_e = sum_e / static_cast<double>(n_e);
  const double mean_ne = sum_ne / static_cast<double>(n_ne);
  const double group_factor =
      std::sqrt(static_cast<double>(n_e) * static_cast<double>(n_ne)) / static_cast<double>(n);
  return (mean_e - mean_ne) / std::sqrt(var) * group_factor;
}

double inequity_penalty(const ZoneDemandSnapshot& snapshot, double step_cost) {
  if (step_cost < 0.0) throw ContractError("inequity_penalty: step_cost must be >= 0");
  return std::abs(point_biserial(snapshot)) * step_cost;
}

}  // namespace evac
