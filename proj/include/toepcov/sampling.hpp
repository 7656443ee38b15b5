#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "toepcov/kernels.hpp"
#include "toepcov/toeplitz.hpp"

namespace toepcov {

/// Unit columns x ~ N(0, T), or columns scaled by 1/sqrt(n) so that X X^T is the
/// empirical covariance.
enum class ColumnScale { Unit = 0, InvSqrtN = 1 };

/// Thrown when code reads an entry that was not observed.
class SealedEntryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// d x n Gaussian samples X = B G with B B^T = T. Column l of G comes from its own
/// counter-based stream, so the first n columns do not change when n grows.
struct SampleBatch {
  int d = 0;
  int n = 0;
  std::uint64_t seed = 0;
  ColumnScale scale = ColumnScale::Unit;
  Matrix values;
};

SampleBatch draw_samples(const ToeplitzVector& t, int n, std::uint64_t seed,
                         ColumnScale scale = ColumnScale::Unit);
/// Same draw from a precomputed factor B (d x r), e.g. sqrt_factor(t).
SampleBatch draw_samples(const Matrix& factor, int n, std::uint64_t seed,
                         ColumnScale scale = ColumnScale::Unit);

/// The r x n standard normal matrix G behind draw_samples.
Matrix standard_normals(int r, int n, std::uint64_t seed);

/// Little-endian dump: int64 d, int64 n, uint64 seed, int64 scale, then d*n float64
/// values in column-major order.
void write_batch(std::ostream& out, const SampleBatch& batch);
SampleBatch read_batch(std::istream& in);

/// Entry-level access to a batch restricted to a fixed set of coordinates.
/// The same pattern is read from every vector.
class ObservationSet {
 public:
  /// `pattern` holds 1-based coordinates; duplicates are read once.
  ObservationSet(const SampleBatch& batch, std::span<const int> pattern);
  /// Wraps already-extracted rows (one per pattern coordinate, one column per sample).
  ObservationSet(int d, std::vector<int> pattern, kernels::RowMatrix observed,
                 ColumnScale scale = ColumnScale::Unit);

  int d() const { return d_; }
  int n() const { return static_cast<int>(observed_.cols()); }
  ColumnScale scale() const { return scale_; }
  /// Sorted, de-duplicated 1-based coordinates.
  const std::vector<int>& pattern() const { return pattern_; }
  /// Row r is coordinate pattern()[r] across all samples.
  const kernels::RowMatrix& observed() const { return observed_; }

  bool is_observed(int coordinate) const;
  /// Throws SealedEntryError for an unobserved coordinate.
  double value(int sample, int coordinate) const;
  /// d x n matrix with NaN in every unobserved entry.
  Matrix poisoned_dense() const;

  long esc() const { return n() > 0 ? static_cast<long>(pattern_.size()) : 0; }
  long vsc() const { return pattern_.empty() ? 0 : n(); }
  long tsc() const { return static_cast<long>(pattern_.size()) * n(); }

 private:
  int d_;
  std::vector<int> pattern_;
  kernels::RowMatrix observed_;
  ColumnScale scale_;
};

/// Draws only the pattern rows of B G; the values match observe(draw_samples(...))
/// up to floating-point summation order.
ObservationSet observe_draw(const Matrix& factor, std::span<const int> pattern, int n, std::uint64_t seed,
                            ColumnScale scale = ColumnScale::Unit);

ObservationSet observe(const SampleBatch& batch, std::span<const int> pattern);

/// 1..count.
std::vector<int> prefix_pattern(int count);

}  // namespace toepcov
