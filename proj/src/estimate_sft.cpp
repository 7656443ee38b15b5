#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "toepcov/estimators.hpp"
#include "toepcov/rng.hpp"

namespace toepcov {

namespace {

constexpr double kPinvCutoff = 1e-10;

CMatrix pinv(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  Vector inv = Vector::Zero(sv.size());
  const double top = sv.size() > 0 ? sv[0] : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > kPinvCutoff * top) inv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

std::vector<double> net_points(double step) {
  std::vector<double> pts;
  for (long i = 0;; ++i) {
    const double f = static_cast<double>(i) * step;
    if (f >= 1.0 - 1e-12) break;
    pts.push_back(f);
  }
  return pts;
}

// Sketched second-moment matrix C = S1 X X^T S2^T and the sketch geometry.
class SketchedProblem {
 public:
  SketchedProblem(const ObservationSet& obs, const SftPlan& plan) : s1_(plan.s1), s2_(plan.s2) {
    const double col = obs.scale() == ColumnScale::InvSqrtN ? 1.0 : 1.0 / std::sqrt(static_cast<double>(obs.n()));
    const Matrix x1 = rows(obs, s1_) * col;
    const Matrix x2 = rows(obs, s2_) * col;
    c_ = (x1 * x2.transpose()).cast<std::complex<double>>();
  }

  struct Fit {
    CMatrix w;
    double residual = 0.0;
  };

  Fit fit(const std::vector<double>& freqs) const {
    const CMatrix a = sketched_fourier(s1_, freqs);
    const CMatrix b = sketched_fourier(s2_, freqs);
    Fit out;
    out.w = pinv(a) * c_ * pinv(b).adjoint();
    out.residual = (a * out.w * b.adjoint() - c_).norm();
    return out;
  }

 private:
  static Matrix rows(const ObservationSet& obs, const SamplingMatrix& s) {
    Matrix out(s.rows(), obs.n());
    for (int r = 0; r < s.rows(); ++r) {
      const int coord = s.indices[static_cast<std::size_t>(r)];
      const auto it = std::lower_bound(obs.pattern().begin(), obs.pattern().end(), coord);
      out.row(r) = obs.observed().row(it - obs.pattern().begin()) * s.scales[static_cast<std::size_t>(r)];
    }
    return out;
  }

  static CMatrix sketched_fourier(const SamplingMatrix& s, const std::vector<double>& freqs) {
    CMatrix f(s.rows(), static_cast<Eigen::Index>(freqs.size()));
    for (int r = 0; r < s.rows(); ++r) {
      const int row = s.indices[static_cast<std::size_t>(r)] - 1;
      for (std::size_t c = 0; c < freqs.size(); ++c) {
        f(r, static_cast<Eigen::Index>(c)) =
            s.scales[static_cast<std::size_t>(r)] * std::polar(1.0, -2.0 * std::numbers::pi * wrap_frequency(freqs[c] * row));
      }
    }
    return f;
  }

  const SamplingMatrix& s1_;
  const SamplingMatrix& s2_;
  CMatrix c_;
};

void check_plan(const ObservationSet& obs, const SftPlan& plan) {
  if (obs.d() != plan.d) throw std::invalid_argument("estimate_sft: dimension differs from plan");
  if (obs.pattern() != plan.pattern) throw std::invalid_argument("estimate_sft: observation pattern must be the union of the sketches");
}

// Next nondecreasing index tuple in lexicographic order; false after the last.
bool next_multiset(std::vector<int>& idx, int points) {
  for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
    if (idx[static_cast<std::size_t>(pos)] < points - 1) {
      const int v = idx[static_cast<std::size_t>(pos)] + 1;
      for (std::size_t q = static_cast<std::size_t>(pos); q < idx.size(); ++q) idx[q] = v;
      return true;
    }
  }
  return false;
}

}  // namespace

long multiset_count(long net_points, int m) {
  // C(N + m - 1, m), saturating.
  long double acc = 1.0L;
  for (int i = 1; i <= m; ++i) {
    acc = acc * static_cast<long double>(net_points + m - i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(std::numeric_limits<long>::max() / 2)) return std::numeric_limits<long>::max();
  }
  return static_cast<long>(std::llround(acc));
}

SftPlan plan_sft(int d, const SftOptions& opts) {
  if (d < 1) throw std::invalid_argument("plan_sft: d must be positive");
  if (opts.m < 1) throw std::invalid_argument("plan_sft: m must be positive");
  if (!(opts.c1 >= 1.0) || !(opts.c2 > 0.0)) throw std::invalid_argument("plan_sft: need c1 >= 1 and c2 > 0");
  SftPlan plan;
  plan.d = d;
  plan.options = opts;
  plan.net_step = std::isnan(opts.net_step) ? 1.0 / (4.0 * d) : opts.net_step;
  if (!(plan.net_step > 0.0 && plan.net_step <= 1.0)) throw std::invalid_argument("plan_sft: net step must lie in (0, 1]");

  const LeverageProfile profile = fourier_leverage_bound(d, std::min(2 * opts.m, d));
  const double eps = 1.0 / opts.c1;
  const double delta = std::clamp(std::pow(plan.net_step, opts.m) / opts.c2, 1e-300, 1.0);
  plan.s1 = draw_sampling_matrix(profile, eps, delta, opts.seed, {opts.oversampling, 1});
  plan.s2 = draw_sampling_matrix(profile, eps, delta, opts.seed, {opts.oversampling, 2});
  plan.pattern = plan.s1.indices;
  plan.pattern.insert(plan.pattern.end(), plan.s2.indices.begin(), plan.s2.indices.end());
  std::sort(plan.pattern.begin(), plan.pattern.end());
  plan.pattern.erase(std::unique(plan.pattern.begin(), plan.pattern.end()), plan.pattern.end());
  return plan;
}

double sft_candidate_residual(const ObservationSet& obs, const SftPlan& plan, const std::vector<double>& freqs) {
  check_plan(obs, plan);
  return SketchedProblem(obs, plan).fit(freqs).residual;
}

EstimateReport estimate_sft(const ObservationSet& obs, const SftPlan& plan) {
  check_plan(obs, plan);
  const SftOptions& opts = plan.options;
  const int m = opts.m;
  const std::vector<double> net = net_points(plan.net_step);
  const int points = static_cast<int>(net.size());
  const long total = multiset_count(points, m);

  Diagnostics diag;
  diag.net_size = points;
  std::vector<std::vector<int>> candidates;
  if (total <= opts.candidate_cap) {
    candidates.reserve(static_cast<std::size_t>(total));
    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    do candidates.push_back(idx);
    while (next_multiset(idx, points));
  } else if (opts.randomized_fallback) {
    // Heuristic: uniform random sorted tuples instead of the full net.
    diag.randomized_search = true;
    CounterRng rng(opts.seed, 3);
    for (long c = 0; c < opts.randomized_candidates; ++c) {
      std::vector<int> idx(static_cast<std::size_t>(m));
      for (auto& v : idx) v = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(points));
      std::sort(idx.begin(), idx.end());
      candidates.push_back(std::move(idx));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  } else {
    std::ostringstream msg;
    msg << "estimate_sft: " << total << " candidates exceed the cap of " << opts.candidate_cap
        << "; raise candidate_cap to at least " << total << " or enable the randomized fallback";
    throw std::length_error(msg.str());
  }

  const SketchedProblem problem(obs, plan);
  const long count = static_cast<long>(candidates.size());
  std::vector<double> residuals(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 16)
  for (long c = 0; c < count; ++c) {
    std::vector<double> freqs;
    for (int i : candidates[static_cast<std::size_t>(c)]) freqs.push_back(net[static_cast<std::size_t>(i)]);
    residuals[static_cast<std::size_t>(c)] = problem.fit(freqs).residual;
  }
  // Candidates are in lexicographic order, so the first minimum is the
  // lexicographically smallest tuple among ties.
  long best = 0;
  for (long c = 1; c < count; ++c)
    if (residuals[static_cast<std::size_t>(c)] < residuals[static_cast<std::size_t>(best)]) best = c;
  diag.candidates_evaluated = count;
  diag.c_best = residuals[static_cast<std::size_t>(best)];

  std::vector<double> best_freqs;
  for (int i : candidates[static_cast<std::size_t>(best)]) best_freqs.push_back(net[static_cast<std::size_t>(i)]);
  const SketchedProblem::Fit fit = problem.fit(best_freqs);
  const CMatrix f = fourier_matrix(best_freqs, obs.d());
  const CVector averaged = avg_complex(f * fit.w * f.adjoint());
  const double real_mass = averaged.real().norm();
  const double imag_mass = averaged.imag().norm();
  diag.imag_mass_ratio = real_mass > 0.0 ? imag_mass / real_mass : (imag_mass > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  diag.realification_warning = diag.imag_mass_ratio > 1e-8;

  EstimateReport report{ToeplitzVector(Vector(averaged.real())), "sft", std::nullopt, counters_of(obs), false, diag};
  return report;
}

}  // namespace toepcov
