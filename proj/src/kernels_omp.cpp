#include <omp.h>

#include "toepcov/kernels.hpp"

namespace toepcov::kernels {

LagSums lag_sums_omp(const RowMatrix& x, std::span<const int> positions, int d) {
  const auto m = static_cast<Eigen::Index>(positions.size());

  // Upper triangle of the Gram matrix of observed rows. Every entry is one dot
  // product evaluated by a single thread, so the result is independent of the
  // thread count.
  RowMatrix gram = RowMatrix::Zero(m, m);
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = j; k < m; ++k) {
      gram(j, k) = x.row(j).dot(x.row(k));
    }
  }

  LagSums out{std::vector<double>(static_cast<std::size_t>(d), 0.0),
              std::vector<long>(static_cast<std::size_t>(d), 0)};
  for (Eigen::Index j = 0; j < m; ++j) {
    out.counts[0] += 1;
    out.sums[0] += gram(j, j);
    for (Eigen::Index k = j + 1; k < m; ++k) {
      const auto s = static_cast<std::size_t>(std::abs(positions[j] - positions[k]));
      out.counts[s] += 2;
      out.sums[s] += 2.0 * gram(j, k);
    }
  }
  return out;
}

void toeplitz_matvec_omp(const Eigen::VectorXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const Eigen::Index d = a.size();
  y.resize(d);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < d; ++i) {
    // Row i of Toep(a) is a[i], a[i-1], ..., a[1], a[0], a[1], ..., a[d-1-i].
    double acc = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) acc += a[i - j] * x[j];
    for (Eigen::Index j = i; j < d; ++j) acc += a[j - i] * x[j];
    y[i] = acc;
  }
}

}  // namespace toepcov::kernels
