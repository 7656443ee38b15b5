#pragma once

#include <cstdint>
#include <vector>

#include "toepcov/toeplitz.hpp"

namespace toepcov {

/// Row leverage scores tau_j = a_j (A^* A)^+ a_j^*. The pseudoinverse drops
/// eigenvalues of A^* A below 1e-12 of the largest.
std::vector<double> leverage_scores(const CMatrix& a);
std::vector<double> leverage_scores(const Matrix& a);

/// Closed-form upper bounds on the leverage scores of any d x s Fourier matrix.
struct LeverageProfile {
  int d = 0;
  int s = 0;
  std::vector<double> tau_bar;

  double sum() const;
};

struct LeverageBoundOptions {
  /// Also cap by c s^6 log^3(s+1) / d. Off by default: c is not pinned down.
  bool uniform_term = false;
  double uniform_c = 1.0;
};

/// tau_bar_j = min(1, s / min(j, d+1-j)) for 1-based j.
LeverageProfile fourier_leverage_bound(int d, int s, const LeverageBoundOptions& opts = {});

/// 2 + 2 s (1 + ln ceil(d/2)), the harmonic-sum ceiling on sum_j tau_bar_j.
double leverage_sum_ceiling(int d, int s);

/// Row sampler: selected index j (1-based) kept with probability p_j, scaled by 1/sqrt(p_j).
struct SamplingMatrix {
  int d = 0;
  std::vector<int> indices;
  std::vector<double> probabilities;
  std::vector<double> scales;
  std::uint64_t seed = 0;

  int rows() const { return static_cast<int>(indices.size()); }
  /// S C for a d x p matrix C.
  CMatrix apply(const CMatrix& c) const;
  Matrix apply(const Matrix& c) const;
};

struct SamplingOptions {
  double oversampling = 8.0;  ///< the constant c in p_j = min(1, tau_j c log(d/delta) / eps^2)
  std::uint64_t stream = 0;
};

/// Inclusion probabilities for every index, before the Bernoulli draws.
std::vector<double> sampling_probabilities(const LeverageProfile& profile, double eps, double delta,
                                           double oversampling);

SamplingMatrix draw_sampling_matrix(const LeverageProfile& profile, double eps, double delta,
                                    std::uint64_t seed, const SamplingOptions& opts = {});

}  // namespace toepcov
