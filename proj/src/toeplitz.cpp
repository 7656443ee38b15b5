#include "toepcov/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "toepcov/kernels.hpp"
#include "toepcov/rng.hpp"

namespace toepcov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename MatVec>
NormEstimate power_iterate(int d, MatVec&& apply, const PowerIterationOptions& opts) {
  NormEstimate out;
  if (d == 0) {
    out.converged = true;
    return out;
  }
  CounterRng rng(opts.seed, 0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.next_normal();
  v.normalize();
  Vector w(d);

  // ||M v_k|| with v_k = M^k v_0 / ||M^k v_0|| increases monotonically to max |lambda|,
  // which sidesteps the sign oscillation of plain power iteration on indefinite M.
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    apply(v, w);
    const double est = w.norm();
    out.value = std::max(out.value, est);
    out.iterations = it;
    if (est == 0.0) {
      out.converged = true;
      return out;
    }
    if (it > 1 && std::abs(est - prev) <= opts.rel_tol * est) {
      out.converged = true;
      return out;
    }
    prev = est;
    v = w / est;
  }
  return out;
}

}  // namespace

ToeplitzVector::ToeplitzVector(Vector a) : a_(std::move(a)) {
  if (a_.size() == 0) throw std::invalid_argument("ToeplitzVector: dimension must be positive");
}

ToeplitzVector::ToeplitzVector(const std::vector<double>& a)
    : ToeplitzVector(Vector(Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size())))) {}

ToeplitzVector ToeplitzVector::zeros(int d) { return ToeplitzVector(Vector::Zero(d)); }

ToeplitzVector ToeplitzVector::identity(int d) {
  Vector a = Vector::Zero(d);
  if (d > 0) a[0] = 1.0;
  return ToeplitzVector(std::move(a));
}

ToeplitzVector operator-(const ToeplitzVector& x, const ToeplitzVector& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("ToeplitzVector: dimension mismatch");
  return ToeplitzVector(Vector(x.values() - y.values()));
}

double wrap_frequency(double f) {
  double w = f - std::floor(f);
  if (w >= 1.0) w = 0.0;
  return w;
}

double circular_distance(double f, double g) {
  const double diff = wrap_frequency(f - g);
  return std::min(diff, 1.0 - diff);
}

double chord_distance(double f, double g) {
  return 2.0 * std::sin(std::numbers::pi * circular_distance(f, g));
}

void FrequencyModel::validate(double freq_tol) const {
  if (d < 1) throw std::invalid_argument("FrequencyModel: d must be positive");
  if (freqs.size() != weights.size()) {
    throw std::invalid_argument("FrequencyModel: freqs and weights differ in length");
  }
  const std::size_t r = freqs.size();
  for (std::size_t j = 0; j < r; ++j) {
    if (!std::isfinite(freqs[j]) || freqs[j] < 0.0 || freqs[j] > 1.0) {
      std::ostringstream msg;
      msg << "FrequencyModel: freqs[" << j << "] = " << freqs[j] << " outside [0,1]";
      throw std::invalid_argument(msg.str());
    }
    if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
      std::ostringstream msg;
      msg << "FrequencyModel: weights[" << j << "] = " << weights[j] << " is negative";
      throw std::invalid_argument(msg.str());
    }
  }
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = j + 1; i < r; ++i) {
      if (circular_distance(freqs[i], freqs[j]) <= freq_tol) {
        std::ostringstream msg;
        msg << "FrequencyModel: freqs[" << j << "] and freqs[" << i << "] coincide (" << freqs[j] << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
  for (std::size_t j = 0; j < r; ++j) {
    const double partner = wrap_frequency(-freqs[j]);
    bool paired = false;
    for (std::size_t i = 0; i < r && !paired; ++i) {
      const double wtol = freq_tol * std::max({1.0, weights[i], weights[j]});
      paired = circular_distance(freqs[i], partner) <= freq_tol &&
               std::abs(weights[i] - weights[j]) <= wtol;
    }
    if (!paired) {
      std::ostringstream msg;
      msg << "FrequencyModel: frequency " << freqs[j] << " (index " << j << ", weight " << weights[j]
          << ") has no conjugate partner at " << partner << " with equal weight";
      throw std::invalid_argument(msg.str());
    }
  }
}

Matrix densify(const ToeplitzVector& t) {
  const int d = t.dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) m(j, k) = t[std::abs(j - k)];
  return m;
}

ToeplitzVector avg(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("avg: matrix is not square");
  const int d = static_cast<int>(m.rows());
  Vector a(d);
  for (int s = 0; s < d; ++s) {
    double sum = 0.0;
    for (int j = 0; j + s < d; ++j) sum += m(j, j + s) + m(j + s, j);
    a[s] = sum / (2.0 * (d - s));
  }
  return ToeplitzVector(std::move(a));
}

CVector avg_complex(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("avg: matrix is not square");
  const int d = static_cast<int>(m.rows());
  CVector a(d);
  for (int s = 0; s < d; ++s) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j + s < d; ++j) sum += m(j, j + s) + m(j + s, j);
    a[s] = sum / (2.0 * (d - s));
  }
  return a;
}

CMatrix fourier_matrix(std::span<const double> freqs, int d) {
  if (d < 1) throw std::invalid_argument("fourier_matrix: d must be positive");
  CMatrix f(d, static_cast<Eigen::Index>(freqs.size()));
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    for (int row = 0; row < d; ++row) {
      // Reduce the phase before the trig call so large rows keep full precision.
      const double phase = wrap_frequency(freqs[j] * row);
      f(row, static_cast<Eigen::Index>(j)) = std::polar(1.0, -kTwoPi * phase);
    }
  }
  return f;
}

ToeplitzVector synthesize(const FrequencyModel& fm) {
  fm.validate();
  Vector a = Vector::Zero(fm.d);
  for (std::size_t j = 0; j < fm.freqs.size(); ++j) {
    for (int s = 0; s < fm.d; ++s) {
      a[s] += fm.weights[j] * std::cos(kTwoPi * wrap_frequency(fm.freqs[j] * s));
    }
  }
  return ToeplitzVector(std::move(a));
}

NormEstimate spectral_norm(const Matrix& m, const PowerIterationOptions& opts) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_norm: matrix is not square");
  return power_iterate(
      static_cast<int>(m.rows()), [&](const Vector& v, Vector& w) { w.noalias() = m * v; }, opts);
}

NormEstimate spectral_norm(const ToeplitzVector& t, const PowerIterationOptions& opts) {
  return power_iterate(
      t.dim(), [&](const Vector& v, Vector& w) { kernels::toeplitz_matvec_omp(t.values(), v, w); }, opts);
}

double relative_spectral_error(const ToeplitzVector& estimate, const ToeplitzVector& truth) {
  const double num = spectral_norm(estimate - truth).value;
  const double den = spectral_norm(truth).value;
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double dtft_norm_bound(const ToeplitzVector& t, long grid_points) {
  const long d = t.dim();
  if (grid_points < 4 * d * d) throw std::invalid_argument("dtft_norm_bound: grid_points must be >= 4 d^2");
  std::vector<double> cos_table(static_cast<std::size_t>(grid_points));
  for (long i = 0; i < grid_points; ++i) {
    cos_table[static_cast<std::size_t>(i)] = std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(grid_points));
  }
  double best = 0.0;
  for (long i = 0; i < grid_points; ++i) {
    double value = t[0];
    long idx = 0;
    for (long s = 1; s < d; ++s) {
      idx += i;
      if (idx >= grid_points) idx -= grid_points;
      value += 2.0 * t[static_cast<int>(s)] * cos_table[static_cast<std::size_t>(idx)];
    }
    best = std::max(best, std::abs(value));
  }
  return best;
}

double dtft_grid_slack(const ToeplitzVector& t, long grid_points) {
  double lipschitz = 0.0;
  for (int s = 1; s < t.dim(); ++s) lipschitz += 2.0 * s * std::abs(t[s]);
  lipschitz *= kTwoPi;
  return lipschitz / (2.0 * static_cast<double>(grid_points));
}

Matrix sqrt_factor(const ToeplitzVector& t, double psd_tol) {
  const int d = t.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(densify(t));
  const Vector& lambda = es.eigenvalues();
  const double floor = -psd_tol * std::abs(t[0]);
  if (lambda[0] < floor) {
    std::ostringstream msg;
    msg << "sqrt_factor: smallest eigenvalue " << lambda[0] << " below -psd_tol * a_0 = " << floor;
    throw NotPsdError(msg.str());
  }
  const double top = std::max(lambda[d - 1], 0.0);
  std::vector<int> keep;
  for (int i = 0; i < d; ++i) {
    if (lambda[i] > 1e-12 * top) keep.push_back(i);
  }
  if (keep.empty()) return Matrix::Zero(d, 1);
  Matrix b(d, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(lambda[keep[c]]);
  }
  return b;
}

LowRankStats low_rank_stats(const ToeplitzVector& t, int k) {
  const int d = t.dim();
  if (k < 0 || k > d) throw std::invalid_argument("low_rank_stats: k must lie in [0, d]");
  const Vector lambda = symmetric_eigenvalues(densify(t));
  std::vector<double> ordered(lambda.data(), lambda.data() + d);
  std::sort(ordered.begin(), ordered.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  LowRankStats out;
  for (int i = 0; i < d; ++i) {
    out.trace += ordered[i];
    if (i >= k) out.trace_tail += ordered[i];
  }
  out.norm2_tail = k < d ? std::abs(ordered[k]) : 0.0;
  return out;
}

}  // namespace toepcov
