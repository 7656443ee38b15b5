#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace toepcov {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Relative (to a_0) tolerance below which negative eigenvalues count as round-off.
inline constexpr double kPsdTol = 1e-8;
/// Tolerance used when matching a frequency with its conjugate partner.
inline constexpr double kFreqTol = 1e-9;

/// Thrown when a covariance that must be positive semidefinite is not.
class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The d diagonal values a_0..a_{d-1} of a real symmetric Toeplitz matrix.
class ToeplitzVector {
 public:
  ToeplitzVector() = default;
  explicit ToeplitzVector(Vector a);
  explicit ToeplitzVector(const std::vector<double>& a);
  ToeplitzVector(std::initializer_list<double> a) : ToeplitzVector(std::vector<double>(a)) {}

  static ToeplitzVector zeros(int d);
  static ToeplitzVector identity(int d);

  int dim() const { return static_cast<int>(a_.size()); }
  double operator[](int s) const { return a_[s]; }
  const Vector& values() const { return a_; }
  std::vector<double> to_std() const { return {a_.data(), a_.data() + a_.size()}; }

  friend bool operator==(const ToeplitzVector& x, const ToeplitzVector& y) {
    return x.a_.size() == y.a_.size() && x.a_ == y.a_;
  }

 private:
  Vector a_;
};

ToeplitzVector operator-(const ToeplitzVector& x, const ToeplitzVector& y);

/// Off-grid frequencies in [0,1) with nonnegative weights: T = F_S D F_S^*.
struct FrequencyModel {
  int d = 0;
  std::vector<double> freqs;
  std::vector<double> weights;

  /// Throws std::invalid_argument naming the first offending frequency when the
  /// set is not closed under conjugation or the fields are inconsistent.
  void validate(double freq_tol = kFreqTol) const;
};

/// Distance between two frequencies on the unit circle's angle, in [0, 1/2].
double circular_distance(double f, double g);
/// |e^{2 pi i f} - e^{2 pi i g}|.
double chord_distance(double f, double g);
/// Maps any real frequency into [0,1).
double wrap_frequency(double f);

Matrix densify(const ToeplitzVector& t);

/// Mean of each diagonal over all ordered pairs (j,k) with |j-k| = s.
ToeplitzVector avg(const Matrix& m);
/// Complex diagonal averaging; the real part is the Toeplitz vector of avg.
CVector avg_complex(const CMatrix& m);

/// Column j is (1, e^{-2 pi i f_j}, ..., e^{-2 pi i f_j (d-1)}).
CMatrix fourier_matrix(std::span<const double> freqs, int d);

/// a_s = sum_j w_j cos(2 pi f_j s). Validates conjugate closure first.
ToeplitzVector synthesize(const FrequencyModel& fm);

struct PowerIterationOptions {
  int max_iterations = 20000;
  double rel_tol = 1e-9;
  std::uint64_t seed = 0x70e9c0f5ULL;
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest absolute eigenvalue of a symmetric matrix by power iteration on M^2.
NormEstimate spectral_norm(const Matrix& m, const PowerIterationOptions& opts = {});
/// Same, using the Toeplitz structure for the matvec (no densification).
NormEstimate spectral_norm(const ToeplitzVector& t, const PowerIterationOptions& opts = {});

/// ||Toep(estimate) - Toep(truth)||_2 / ||Toep(truth)||_2 (0 when both vanish).
double relative_spectral_error(const ToeplitzVector& estimate, const ToeplitzVector& truth);

/// Ascending eigenvalues from a full symmetric eigensolve.
Vector symmetric_eigenvalues(const Matrix& m);

/// max_x |a_0 + 2 sum_s a_s cos(2 pi s x)| over grid_points uniform points of [0,1).
/// Requires grid_points >= 4 d^2.
double dtft_norm_bound(const ToeplitzVector& t, long grid_points);
/// Upper bound on how far the grid maximum can sit below the true maximum:
/// (1/(2N)) * 2 pi * sum_s 2 s |a_s|.
double dtft_grid_slack(const ToeplitzVector& t, long grid_points);

/// B with B B^T = Toep(a). Eigenvalues in [-psd_tol a_0, 0) are clamped to zero and
/// columns for eigenvalues below 1e-12 of the largest are dropped, so B is d x r.
Matrix sqrt_factor(const ToeplitzVector& t, double psd_tol = kPsdTol);

struct LowRankStats {
  double norm2_tail = 0.0;  ///< ||T - T_k||_2
  double trace_tail = 0.0;  ///< tr(T - T_k)
  double trace = 0.0;       ///< tr(T)
};

LowRankStats low_rank_stats(const ToeplitzVector& t, int k);

}  // namespace toepcov
