#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "toepcov/rng.hpp"
#include "toepcov/toeplitz.hpp"

namespace testing_support {

using namespace toepcov;

// Random conjugate-closed model with `pairs` pairs and an optional zero frequency.
inline FrequencyModel random_model(int d, int pairs, bool with_zero, std::uint64_t seed) {
  CounterRng rng(seed, 99);
  FrequencyModel fm;
  fm.d = d;
  if (with_zero) {
    fm.freqs.push_back(0.0);
    fm.weights.push_back(rng.next_uniform());
  }
  for (int p = 0; p < pairs; ++p) {
    double f;
    do f = 0.5 * rng.next_uniform();
    while (f < 1e-6 || f > 0.5 - 1e-6);
    const double w = rng.next_uniform();
    fm.freqs.insert(fm.freqs.end(), {f, 1.0 - f});
    fm.weights.insert(fm.weights.end(), {w, w});
  }
  return fm;
}

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.next_normal();
  return m;
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace testing_support
