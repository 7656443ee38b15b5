#include "toepcov/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "toepcov/rng.hpp"

namespace toepcov {

namespace {

template <typename M>
std::vector<double> scores_impl(const M& a) {
  using Scalar = typename M::Scalar;
  using Square = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Square gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Square> es(gram);
  const auto& lambda = es.eigenvalues();
  const double top = lambda.size() > 0 ? std::max(lambda.maxCoeff(), 0.0) : 0.0;

  // Rows of A expressed in the retained eigenbasis, scaled by lambda^{-1/2}:
  // tau_j = || a_j V_r Lambda_r^{-1/2} ||^2.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 1e-12 * top) keep.push_back(i);
  Square basis(a.cols(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(lambda[keep[c]]);
  }
  const Square coords = a * basis;
  std::vector<double> tau(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index j = 0; j < a.rows(); ++j) tau[static_cast<std::size_t>(j)] = coords.row(j).squaredNorm();
  return tau;
}

}  // namespace

std::vector<double> leverage_scores(const CMatrix& a) { return scores_impl(a); }
std::vector<double> leverage_scores(const Matrix& a) { return scores_impl(a); }

double LeverageProfile::sum() const { return std::accumulate(tau_bar.begin(), tau_bar.end(), 0.0); }

LeverageProfile fourier_leverage_bound(int d, int s, const LeverageBoundOptions& opts) {
  if (d < 1 || s < 1 || s > d) throw std::invalid_argument("fourier_leverage_bound: need 1 <= s <= d");
  LeverageProfile p{d, s, std::vector<double>(static_cast<std::size_t>(d))};
  const double uniform =
      opts.uniform_term ? opts.uniform_c * std::pow(s, 6) * std::pow(std::log(s + 1.0), 3) / d : 1.0;
  for (int j = 1; j <= d; ++j) {
    const double edge = std::min(j, d + 1 - j);
    p.tau_bar[static_cast<std::size_t>(j - 1)] = std::min({1.0, s / edge, uniform});
  }
  return p;
}

double leverage_sum_ceiling(int d, int s) {
  return 2.0 + 2.0 * s * (1.0 + std::log(std::ceil(d / 2.0)));
}

CMatrix SamplingMatrix::apply(const CMatrix& c) const {
  if (c.rows() != d) throw std::invalid_argument("SamplingMatrix::apply: row count mismatch");
  CMatrix out(rows(), c.cols());
  for (int r = 0; r < rows(); ++r) out.row(r) = c.row(indices[static_cast<std::size_t>(r)] - 1) * scales[static_cast<std::size_t>(r)];
  return out;
}

Matrix SamplingMatrix::apply(const Matrix& c) const {
  if (c.rows() != d) throw std::invalid_argument("SamplingMatrix::apply: row count mismatch");
  Matrix out(rows(), c.cols());
  for (int r = 0; r < rows(); ++r) out.row(r) = c.row(indices[static_cast<std::size_t>(r)] - 1) * scales[static_cast<std::size_t>(r)];
  return out;
}

std::vector<double> sampling_probabilities(const LeverageProfile& profile, double eps, double delta,
                                           double oversampling) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("draw_sampling_matrix: eps and delta must lie in (0, 1]");
  }
  const double factor = oversampling * std::log(profile.d / delta) / (eps * eps);
  std::vector<double> p(profile.tau_bar.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::min(1.0, profile.tau_bar[j] * factor);
  return p;
}

SamplingMatrix draw_sampling_matrix(const LeverageProfile& profile, double eps, double delta,
                                    std::uint64_t seed, const SamplingOptions& opts) {
  const std::vector<double> p = sampling_probabilities(profile, eps, delta, opts.oversampling);
  SamplingMatrix s;
  s.d = profile.d;
  s.seed = seed;
  CounterRng rng(seed, opts.stream);
  for (int j = 1; j <= profile.d; ++j) {
    const double pj = p[static_cast<std::size_t>(j - 1)];
    // One uniform per index whether or not p_j = 1, so the stream position of
    // index j never depends on earlier probabilities.
    const double u = rng.next_uniform();
    if (pj > 0.0 && u <= pj) {
      s.indices.push_back(j);
      s.probabilities.push_back(pj);
      s.scales.push_back(1.0 / std::sqrt(pj));
    }
  }
  return s;
}

}  // namespace toepcov
