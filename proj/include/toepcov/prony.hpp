#pragma once

#include <complex>
#include <span>
#include <vector>

#include "toepcov/toeplitz.hpp"

namespace toepcov {

/// Frequencies and amplitudes of a Fourier-sparse prefix x = F_R y.
struct PronyResult {
  std::vector<double> freqs;                    ///< in [0,1), one per root
  std::vector<std::complex<double>> roots;      ///< raw companion eigenvalues
  CVector coefficients;                         ///< y, same order as freqs
  int requested_k = 0;
  int rank = 0;                                 ///< numerical rank of the Hankel system actually solved
  double hankel_condition = 0.0;                ///< sigma_max / sigma_min of that system
};

/// Hankel system P_k(x) c = -b_k(x) with (P_k)_{ij} = x_{i+j-1} and (b_k)_i = x_{k+i}
/// (1-based), built from the first 2k entries of x.
struct HankelSystem {
  Matrix p;
  Vector b;
};
HankelSystem hankel_system(std::span<const double> x, int k);

/// Roots of z^k + sum_{s=1}^k c_s z^{s-1}, via the eigenvalues of its balanced
/// companion matrix.
std::vector<std::complex<double>> annihilator_roots(const Vector& c);

/// Frequency f with e^{-2 pi i f} = z / |z|.
double root_to_frequency(std::complex<double> z);

/// Exact Prony decomposition of the first 2k entries. A rank-deficient Hankel
/// system (singular values below 1e-10 of the largest) is retried with k equal to
/// its numerical rank. Amplitudes solve F_R y = x over the first `rank` entries.
PronyResult prony_decompose(std::span<const double> x, int k);

/// Prony with roots snapped to the nearest multiple of 2^(3 - beta/k) and
/// amplitudes regressed by least squares over the first 2k entries.
PronyResult prony_inexact(std::span<const double> x, int k, double beta);

/// 2^(3 - beta/k).
double prony_grid_step(int k, double beta);

/// Least-squares y minimizing ||F_R y - x||_2 over the len(x) leading rows.
CVector fourier_least_squares(std::span<const double> freqs, std::span<const double> x);

}  // namespace toepcov
