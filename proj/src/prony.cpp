#include "toepcov/prony.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace toepcov {

namespace {

constexpr double kRankCutoff = 1e-10;

// Parlett-Reinsch balancing with radix 2; leaves eigenvalues unchanged but
// equalizes row and column norms, which matters for companion matrices whose
// coefficients span many orders of magnitude.
void balance(Matrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

struct RankInfo {
  int rank = 0;
  double condition = 0.0;
};

RankInfo numerical_rank(const Matrix& p) {
  Eigen::JacobiSVD<Matrix> svd(p);
  const Vector& sv = svd.singularValues();
  RankInfo info;
  if (sv.size() == 0 || sv[0] == 0.0) return info;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankCutoff * sv[0]) ++info.rank;
  info.condition = sv[0] / sv[info.rank - 1];
  return info;
}

// Solves the Hankel system at the largest k' <= k for which it is numerically
// nonsingular and returns the annihilator roots.
PronyResult prony_roots(std::span<const double> x, int k) {
  if (k < 1) throw std::invalid_argument("prony: k must be positive");
  if (static_cast<int>(x.size()) < 2 * k) throw std::invalid_argument("prony: need 2k observed entries");
  PronyResult out;
  out.requested_k = k;
  int kk = k;
  for (;;) {
    const HankelSystem sys = hankel_system(x, kk);
    const RankInfo info = numerical_rank(sys.p);
    if (info.rank == 0) {
      out.rank = 0;
      return out;
    }
    if (info.rank < kk) {
      kk = info.rank;
      continue;
    }
    const Vector c = sys.p.colPivHouseholderQr().solve(-sys.b);
    out.rank = kk;
    out.hankel_condition = info.condition;
    out.roots = annihilator_roots(c);
    return out;
  }
}

}  // namespace

HankelSystem hankel_system(std::span<const double> x, int k) {
  if (static_cast<int>(x.size()) < 2 * k) throw std::invalid_argument("hankel_system: need 2k entries");
  HankelSystem sys{Matrix(k, k), Vector(k)};
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sys.p(i, j) = x[static_cast<std::size_t>(i + j)];
    sys.b[i] = x[static_cast<std::size_t>(k + i)];
  }
  return sys;
}

std::vector<std::complex<double>> annihilator_roots(const Vector& c) {
  const Eigen::Index k = c.size();
  if (k == 0) return {};
  // q(z) = z^k + c_k z^{k-1} + ... + c_1, so the top row is -(c_k, ..., c_1).
  Matrix companion = Matrix::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) companion(0, j) = -c[k - 1 - j];
  for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  balance(companion);
  Eigen::EigenSolver<Matrix> es(companion, false);
  const auto& ev = es.eigenvalues();
  std::vector<std::complex<double>> roots(ev.data(), ev.data() + k);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return root_to_frequency(a) < root_to_frequency(b); });
  return roots;
}

double root_to_frequency(std::complex<double> z) {
  return wrap_frequency(-std::arg(z) / (2.0 * std::numbers::pi));
}

CVector fourier_least_squares(std::span<const double> freqs, std::span<const double> x) {
  const CMatrix f = fourier_matrix(freqs, static_cast<int>(x.size()));
  CVector rhs(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = x[i];
  return f.completeOrthogonalDecomposition().solve(rhs);
}

PronyResult prony_decompose(std::span<const double> x, int k) {
  PronyResult out = prony_roots(x, k);
  out.freqs.reserve(out.roots.size());
  for (auto z : out.roots) out.freqs.push_back(root_to_frequency(z));
  if (out.rank == 0) {
    out.coefficients = CVector(0);
    return out;
  }
  // Square Vandermonde solve on the leading `rank` entries.
  const CMatrix f = fourier_matrix(out.freqs, out.rank);
  CVector rhs(out.rank);
  for (int i = 0; i < out.rank; ++i) rhs[i] = x[static_cast<std::size_t>(i)];
  out.coefficients = f.fullPivLu().solve(rhs);
  return out;
}

double prony_grid_step(int k, double beta) { return std::exp2(3.0 - beta / k); }

PronyResult prony_inexact(std::span<const double> x, int k, double beta) {
  if (k < 1) throw std::invalid_argument("prony_inexact: k must be positive");
  if (beta < k * std::log(static_cast<double>(k))) throw std::invalid_argument("prony_inexact: beta must be >= k log k");
  PronyResult out = prony_roots(x, k);
  const double step = prony_grid_step(k, beta);
  for (auto z : out.roots) {
    double f = root_to_frequency(z);
    if (step < 1.0) f = wrap_frequency(std::round(f / step) * step);
    const bool seen = std::any_of(out.freqs.begin(), out.freqs.end(),
                                  [&](double g) { return circular_distance(f, g) <= 1e-12; });
    if (!seen) out.freqs.push_back(f);
  }
  std::sort(out.freqs.begin(), out.freqs.end());
  out.coefficients = out.freqs.empty() ? CVector(0) : fourier_least_squares(out.freqs, x.first(static_cast<std::size_t>(2 * k)));
  return out;
}

}  // namespace toepcov
