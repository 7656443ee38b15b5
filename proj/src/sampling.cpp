#include "toepcov/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "toepcov/rng.hpp"

namespace toepcov {

static_assert(std::endian::native == std::endian::little, "batch dumps assume a little-endian host");

namespace {

std::vector<int> normalize_pattern(std::span<const int> pattern, int d) {
  std::vector<int> p(pattern.begin(), pattern.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  for (int c : p) {
    if (c < 1 || c > d) {
      std::ostringstream msg;
      msg << "observe: coordinate " << c << " outside [1, " << d << "]";
      throw std::out_of_range(msg.str());
    }
  }
  return p;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("read_batch: truncated input");
  return v;
}

double column_scale(ColumnScale scale, int n) {
  return scale == ColumnScale::InvSqrtN ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
}

}  // namespace

Matrix standard_normals(int r, int n, std::uint64_t seed) {
  Matrix g(r, n);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < n; ++l) {
    CounterRng rng(seed, static_cast<std::uint64_t>(l));
    for (int i = 0; i < r; ++i) g(i, l) = rng.next_normal();
  }
  return g;
}

SampleBatch draw_samples(const ToeplitzVector& t, int n, std::uint64_t seed, ColumnScale scale) {
  return draw_samples(sqrt_factor(t), n, seed, scale);
}

SampleBatch draw_samples(const Matrix& factor, int n, std::uint64_t seed, ColumnScale scale) {
  if (n < 1) throw std::invalid_argument("draw_samples: n must be positive");
  SampleBatch batch;
  batch.d = static_cast<int>(factor.rows());
  batch.n = n;
  batch.seed = seed;
  batch.scale = scale;
  batch.values = factor * standard_normals(static_cast<int>(factor.cols()), n, seed);
  batch.values *= column_scale(scale, n);
  return batch;
}

void write_batch(std::ostream& out, const SampleBatch& batch) {
  put<std::int64_t>(out, batch.d);
  put<std::int64_t>(out, batch.n);
  put<std::uint64_t>(out, batch.seed);
  put<std::int64_t>(out, static_cast<std::int64_t>(batch.scale));
  out.write(reinterpret_cast<const char*>(batch.values.data()),
            static_cast<std::streamsize>(sizeof(double) * batch.values.size()));
}

SampleBatch read_batch(std::istream& in) {
  SampleBatch batch;
  const auto d = get<std::int64_t>(in);
  const auto n = get<std::int64_t>(in);
  batch.seed = get<std::uint64_t>(in);
  const auto scale = get<std::int64_t>(in);
  if (d < 1 || n < 1 || d > std::numeric_limits<int>::max() || n > std::numeric_limits<int>::max() ||
      (scale != 0 && scale != 1)) {
    throw std::runtime_error("read_batch: malformed header");
  }
  batch.d = static_cast<int>(d);
  batch.n = static_cast<int>(n);
  batch.scale = static_cast<ColumnScale>(scale);
  batch.values.resize(batch.d, batch.n);
  in.read(reinterpret_cast<char*>(batch.values.data()),
          static_cast<std::streamsize>(sizeof(double) * batch.values.size()));
  if (!in) throw std::runtime_error("read_batch: truncated input");
  return batch;
}

ObservationSet::ObservationSet(const SampleBatch& batch, std::span<const int> pattern)
    : d_(batch.d), pattern_(normalize_pattern(pattern, batch.d)), scale_(batch.scale) {
  observed_.resize(static_cast<Eigen::Index>(pattern_.size()), batch.n);
  for (std::size_t r = 0; r < pattern_.size(); ++r) {
    observed_.row(static_cast<Eigen::Index>(r)) = batch.values.row(pattern_[r] - 1);
  }
}

ObservationSet::ObservationSet(int d, std::vector<int> pattern, kernels::RowMatrix observed, ColumnScale scale)
    : d_(d), pattern_(std::move(pattern)), observed_(std::move(observed)), scale_(scale) {
  if (!std::is_sorted(pattern_.begin(), pattern_.end()) ||
      std::adjacent_find(pattern_.begin(), pattern_.end()) != pattern_.end()) {
    throw std::invalid_argument("ObservationSet: pattern must be sorted and free of duplicates");
  }
  normalize_pattern(pattern_, d_);
  if (observed_.rows() != static_cast<Eigen::Index>(pattern_.size())) {
    throw std::invalid_argument("ObservationSet: one row per pattern coordinate required");
  }
}

bool ObservationSet::is_observed(int coordinate) const {
  return std::binary_search(pattern_.begin(), pattern_.end(), coordinate);
}

double ObservationSet::value(int sample, int coordinate) const {
  const auto it = std::lower_bound(pattern_.begin(), pattern_.end(), coordinate);
  if (it == pattern_.end() || *it != coordinate) {
    std::ostringstream msg;
    msg << "ObservationSet: coordinate " << coordinate << " was not observed";
    throw SealedEntryError(msg.str());
  }
  return observed_(it - pattern_.begin(), sample);
}

Matrix ObservationSet::poisoned_dense() const {
  Matrix dense = Matrix::Constant(d_, n(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < pattern_.size(); ++r) {
    dense.row(pattern_[r] - 1) = observed_.row(static_cast<Eigen::Index>(r));
  }
  return dense;
}

ObservationSet observe_draw(const Matrix& factor, std::span<const int> pattern, int n, std::uint64_t seed,
                            ColumnScale scale) {
  if (n < 1) throw std::invalid_argument("observe_draw: n must be positive");
  const int d = static_cast<int>(factor.rows());
  std::vector<int> p = normalize_pattern(pattern, d);
  Matrix rows(static_cast<Eigen::Index>(p.size()), factor.cols());
  for (std::size_t r = 0; r < p.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = factor.row(p[r] - 1);
  kernels::RowMatrix observed = rows * standard_normals(static_cast<int>(factor.cols()), n, seed);
  observed *= column_scale(scale, n);
  return ObservationSet(d, std::move(p), std::move(observed), scale);
}

ObservationSet observe(const SampleBatch& batch, std::span<const int> pattern) {
  return ObservationSet(batch, pattern);
}

std::vector<int> prefix_pattern(int count) {
  std::vector<int> p(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) p[static_cast<std::size_t>(i)] = i + 1;
  return p;
}

}  // namespace toepcov
