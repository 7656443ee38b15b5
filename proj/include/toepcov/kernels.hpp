#pragma once

// Data-parallel inner loops. Each kernel has a literal serial version, kept as the
// reference the OpenMP version is tested against, and an OpenMP version whose
// reduction order does not depend on the thread count.

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace toepcov::kernels {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-distance sums of products over ordered coordinate pairs.
struct LagSums {
  std::vector<double> sums;   ///< sums[s] = sum_l sum_{|p_j - p_k| = s} x_j x_k
  std::vector<long> counts;   ///< ordered pairs per distance (|R_s|)
};

/// `x` holds one row per observed coordinate and one column per sample;
/// `positions[r]` is the 0-based coordinate of row r. Distances range over 0..d-1.
LagSums lag_sums_serial(const RowMatrix& x, std::span<const int> positions, int d);
LagSums lag_sums_omp(const RowMatrix& x, std::span<const int> positions, int d);

/// y = Toep(a) x.
void toeplitz_matvec_serial(const Eigen::VectorXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void toeplitz_matvec_omp(const Eigen::VectorXd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y);

}  // namespace toepcov::kernels
