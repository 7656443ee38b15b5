#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "toepcov/estimators.hpp"
#include "toepcov/kernels.hpp"

namespace toepcov {

namespace {

void require_prefix_pattern(const ObservationSet& obs, int k, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be positive");
  if (obs.d() < 2 * k) throw std::invalid_argument(std::string(who) + ": need d >= 2k");
  if (obs.pattern() != prefix_pattern(2 * k)) {
    std::ostringstream msg;
    msg << who << ": observation pattern must be exactly coordinates 1.." << 2 * k;
    throw std::invalid_argument(msg.str());
  }
}

std::vector<double> sample_prefix(const ObservationSet& obs, int sample) {
  const auto& rows = obs.observed();
  std::vector<double> x(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) x[static_cast<std::size_t>(r)] = rows(r, sample);
  return x;
}

CMatrix prefix_matrix(const ObservationSet& obs, int rows) {
  return obs.observed().topRows(rows).cast<std::complex<double>>();
}

// Converts sum_l |y_l|^2 over the n columns into per-unit-sample second moments.
double moment_normalizer(const ObservationSet& obs) {
  return obs.scale() == ColumnScale::InvSqrtN ? 1.0 : static_cast<double>(obs.n());
}

bool same_frequency_set(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (double f : a) {
    const bool hit = std::any_of(b.begin(), b.end(), [&](double g) { return circular_distance(f, g) <= tol; });
    if (!hit) return false;
  }
  return true;
}

EstimateReport finish_model(const ObservationSet& obs, const std::string& method, const std::vector<double>& freqs,
                            const std::vector<double>& weights) {
  EstimateReport report;
  report.method = method;
  report.counters = counters_of(obs);
  if (freqs.empty()) {
    report.t_hat = ToeplitzVector::zeros(obs.d());
    report.model = FrequencyModel{obs.d(), {}, {}};
    return report;
  }
  FrequencyModel model = conjugate_closure(obs.d(), freqs, weights);
  report.t_hat = synthesize(model);
  report.model = std::move(model);
  return report;
}

std::vector<double> mean_power(const CMatrix& y, double normalizer) {
  std::vector<double> w(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index l = 0; l < y.rows(); ++l) w[static_cast<std::size_t>(l)] = y.row(l).cwiseAbs2().sum() / normalizer;
  return w;
}

double relative_prefix_residual(const CMatrix& f, const CMatrix& y, const CMatrix& x) {
  const double den = x.norm();
  return den > 0.0 ? (f * y - x).norm() / den : 0.0;
}

}  // namespace

FrequencyModel conjugate_closure(int d, const std::vector<double>& freqs, const std::vector<double>& weights,
                                 double freq_tol) {
  if (freqs.size() != weights.size()) throw std::invalid_argument("conjugate_closure: size mismatch");
  // Merge near-duplicates first.
  std::vector<std::pair<double, double>> items;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    double f = wrap_frequency(freqs[i]);
    if (circular_distance(f, 0.0) <= freq_tol) f = 0.0;
    if (circular_distance(f, 0.5) <= freq_tol) f = 0.5;
    auto it = std::find_if(items.begin(), items.end(), [&](const auto& p) { return circular_distance(p.first, f) <= freq_tol; });
    if (it != items.end()) {
      it->second += weights[i];
    } else {
      items.emplace_back(f, weights[i]);
    }
  }

  FrequencyModel model;
  model.d = d;
  std::vector<bool> used(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto [f, w] = items[i];
    if (f == 0.0 || f == 0.5) {
      model.freqs.push_back(f);
      model.weights.push_back(w);
      continue;
    }
    const double partner = wrap_frequency(-f);
    double pw = 0.0;
    bool found = false;
    for (std::size_t j = i + 1; j < items.size() && !found; ++j) {
      if (!used[j] && circular_distance(items[j].first, partner) <= freq_tol) {
        used[j] = true;
        found = true;
        pw = items[j].second;
      }
    }
    const double half = 0.5 * (w + pw);
    model.freqs.push_back(f);
    model.weights.push_back(half);
    model.freqs.push_back(partner);
    model.weights.push_back(half);
  }
  return model;
}

EstimateReport estimate_prony_exact(const ObservationSet& obs, int k, const PronyExactOptions& opts) {
  require_prefix_pattern(obs, k, "estimate_prony_exact");
  const int n = obs.n();

  const PronyResult first = prony_decompose(sample_prefix(obs, 0), k);
  Diagnostics diag;
  diag.numerical_rank = first.rank;
  diag.max_hankel_condition = first.hankel_condition;
  for (int j = 0; j < n; ++j) {
    const PronyResult res = j == 0 ? first : prony_decompose(sample_prefix(obs, j), k);
    if (res.rank < k) ++diag.rank_reductions;
    diag.max_hankel_condition = std::max(diag.max_hankel_condition, res.hankel_condition);
    if (!same_frequency_set(res.freqs, first.freqs, opts.cluster_tol)) ++diag.frequency_disagreements;
  }
  diag.conditioning_warning = diag.frequency_disagreements > 0;

  std::vector<double> weights;
  if (first.rank > 0) {
    const int r = first.rank;
    const CMatrix f = fourier_matrix(first.freqs, r);
    const CMatrix y = f.fullPivLu().solve(prefix_matrix(obs, r));
    weights = mean_power(y, moment_normalizer(obs));
    diag.reconstruction_residual = relative_prefix_residual(fourier_matrix(first.freqs, 2 * k), y, prefix_matrix(obs, 2 * k));
  }
  EstimateReport report = finish_model(obs, "prony", first.freqs, weights);
  report.diagnostics = diag;
  return report;
}

EstimateReport estimate_prony_denoise(const ObservationSet& obs, int k, double beta) {
  require_prefix_pattern(obs, k, "estimate_prony_denoise");
  const int d = obs.d();
  const int n = obs.n();
  kernels::RowMatrix recon(d, n);
  Diagnostics diag;
  double residual = 0.0;
  for (int j = 0; j < n; ++j) {
    const std::vector<double> x = sample_prefix(obs, j);
    const PronyResult res = prony_inexact(x, k, beta);
    if (res.rank < k) ++diag.rank_reductions;
    diag.numerical_rank = std::max(diag.numerical_rank, res.rank);
    diag.max_hankel_condition = std::max(diag.max_hankel_condition, res.hankel_condition);
    if (res.freqs.empty()) {
      recon.col(j).setZero();
      continue;
    }
    const CVector full = fourier_matrix(res.freqs, d) * res.coefficients;
    recon.col(j) = full.real();
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < 2 * k; ++i) {
      num += std::pow(full[i].real() - x[static_cast<std::size_t>(i)], 2);
      den += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    residual = std::max(residual, den > 0.0 ? std::sqrt(num / den) : 0.0);
  }
  diag.reconstruction_residual = residual;

  std::vector<int> positions(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) positions[static_cast<std::size_t>(i)] = i;
  const kernels::LagSums lags = kernels::lag_sums_omp(recon, positions, d);
  const double norm = moment_normalizer(obs);
  Vector a(d);
  for (int s = 0; s < d; ++s) {
    a[s] = lags.sums[static_cast<std::size_t>(s)] / (norm * static_cast<double>(lags.counts[static_cast<std::size_t>(s)]));
  }
  EstimateReport report{ToeplitzVector(std::move(a)), "prony-denoise", std::nullopt, counters_of(obs), false, diag};
  return report;
}

double conditioned_beta(int d, int k, double kappa, double eps) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("conditioned_beta: kappa must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("conditioned_beta: eps must lie in (0, 1]");
  const double beta = k * (std::ceil(std::log2(static_cast<double>(d))) + std::ceil(std::log2(kappa / eps)) + 3.0);
  return std::max(beta, k * std::log(static_cast<double>(k)));
}

double conditioned_cluster_radius(int d, double kappa, double separation_constant) {
  return separation_constant / std::sqrt(static_cast<double>(d) * kappa);
}

EstimateReport estimate_prony_conditioned(const ObservationSet& obs, int k, double kappa, double eps,
                                          const PronyConditionedOptions& opts) {
  require_prefix_pattern(obs, k, "estimate_prony_conditioned");
  const int d = obs.d();
  const int n = obs.n();
  const double beta = opts.beta.value_or(conditioned_beta(d, k, kappa, eps));
  const double radius = conditioned_cluster_radius(d, kappa, opts.separation_constant);

  Diagnostics diag;
  std::vector<double> roots;
  for (int j = 0; j < n; ++j) {
    const PronyResult res = prony_inexact(sample_prefix(obs, j), k, beta);
    if (res.rank < k) ++diag.rank_reductions;
    diag.numerical_rank = std::max(diag.numerical_rank, res.rank);
    diag.max_hankel_condition = std::max(diag.max_hankel_condition, res.hankel_condition);
    roots.insert(roots.end(), res.freqs.begin(), res.freqs.end());
  }

  // Single-linkage clustering on the circle by chord distance.
  std::sort(roots.begin(), roots.end());
  struct Cluster {
    std::complex<double> sum = 0.0;
    long members = 0;
    double center() const { return wrap_frequency(std::arg(sum) / (2.0 * std::numbers::pi)); }
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == 0 || chord_distance(roots[i], roots[i - 1]) > radius) clusters.emplace_back();
    clusters.back().sum += std::polar(1.0, 2.0 * std::numbers::pi * roots[i]);
    clusters.back().members += 1;
  }
  if (clusters.size() > 1 && chord_distance(roots.front(), roots.back()) <= radius) {
    clusters.front().sum += clusters.back().sum;
    clusters.front().members += clusters.back().members;
    clusters.pop_back();
  }
  diag.clusters = static_cast<int>(clusters.size());
  diag.conditioning_warning = diag.clusters < diag.numerical_rank;

  if (static_cast<int>(clusters.size()) > k) {
    std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) { return a.members > b.members; });
    clusters.resize(static_cast<std::size_t>(k));
  }
  std::vector<double> freqs;
  for (const auto& c : clusters) freqs.push_back(c.center());
  std::sort(freqs.begin(), freqs.end());

  std::vector<double> weights;
  if (!freqs.empty()) {
    const CMatrix f = fourier_matrix(freqs, 2 * k);
    const CMatrix x = prefix_matrix(obs, 2 * k);
    const CMatrix y = f.completeOrthogonalDecomposition().solve(x);
    weights = mean_power(y, moment_normalizer(obs));
    diag.reconstruction_residual = relative_prefix_residual(f, y, x);
  }
  EstimateReport report = finish_model(obs, "prony-cond", freqs, weights);
  report.diagnostics = diag;
  return report;
}

}  // namespace toepcov
