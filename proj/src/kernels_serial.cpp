#include <cstdlib>

#include "toepcov/kernels.hpp"

namespace toepcov::kernels {

LagSums lag_sums_serial(const RowMatrix& x, std::span<const int> positions, int d) {
  LagSums out{std::vector<double>(static_cast<std::size_t>(d), 0.0),
              std::vector<long>(static_cast<std::size_t>(d), 0)};
  const auto m = static_cast<Eigen::Index>(positions.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto s = static_cast<std::size_t>(std::abs(positions[j] - positions[k]));
      out.counts[s] += 1;
      double acc = 0.0;
      for (Eigen::Index l = 0; l < x.cols(); ++l) acc += x(j, l) * x(k, l);
      out.sums[s] += acc;
    }
  }
  return out;
}

void toeplitz_matvec_serial(const Eigen::VectorXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const Eigen::Index d = a.size();
  y.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) acc += a[std::abs(i - j)] * x[j];
    y[i] = acc;
  }
}

}  // namespace toepcov::kernels
