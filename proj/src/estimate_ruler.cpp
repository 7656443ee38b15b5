#include <sstream>
#include <stdexcept>
#include <vector>

#include "toepcov/estimators.hpp"
#include "toepcov/kernels.hpp"

namespace toepcov {

Counters counters_of(const ObservationSet& obs) { return {obs.esc(), obs.vsc(), obs.tsc()}; }

EstimateReport estimate_by_ruler(const ObservationSet& obs, KernelMode mode) {
  const int d = obs.d();
  if (!is_ruler(obs.pattern(), d)) throw std::invalid_argument("estimate_by_ruler: observation pattern is not a complete ruler");
  std::vector<int> positions(obs.pattern().size());
  for (std::size_t r = 0; r < positions.size(); ++r) positions[r] = obs.pattern()[r] - 1;

  const kernels::LagSums lags = mode == KernelMode::Serial ? kernels::lag_sums_serial(obs.observed(), positions, d)
                                                           : kernels::lag_sums_omp(obs.observed(), positions, d);
  // Columns scaled by 1/sqrt(n) already carry the 1/n.
  const double n = obs.scale() == ColumnScale::InvSqrtN ? 1.0 : static_cast<double>(obs.n());
  Vector a(d);
  for (int s = 0; s < d; ++s) {
    a[s] = lags.sums[static_cast<std::size_t>(s)] / (n * static_cast<double>(lags.counts[static_cast<std::size_t>(s)]));
  }

  EstimateReport report{ToeplitzVector(std::move(a)), "ruler", std::nullopt, counters_of(obs), false, {}};
  if (static_cast<int>(positions.size()) == d) report.method = "full";
  return report;
}

}  // namespace toepcov
