#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "toepcov/leverage.hpp"
#include "toepcov/prony.hpp"
#include "toepcov/rulers.hpp"
#include "toepcov/sampling.hpp"
#include "toepcov/toeplitz.hpp"

namespace toepcov {

struct Counters {
  long esc = 0;
  long vsc = 0;
  long tsc = 0;
};

Counters counters_of(const ObservationSet& obs);

struct Diagnostics {
  // Prony family
  int rank_reductions = 0;            ///< samples whose Hankel system was rank deficient
  int frequency_disagreements = 0;    ///< samples whose root set differs from the shared one
  int clusters = 0;
  int numerical_rank = 0;
  bool conditioning_warning = false;
  double max_hankel_condition = 0.0;
  double reconstruction_residual = std::numeric_limits<double>::quiet_NaN();
  // Sparse Fourier transform
  long net_size = 0;
  long candidates_evaluated = 0;
  double c_best = std::numeric_limits<double>::quiet_NaN();
  double imag_mass_ratio = 0.0;
  bool realification_warning = false;
  bool randomized_search = false;
};

struct EstimateReport {
  ToeplitzVector t_hat;
  std::string method;
  std::optional<FrequencyModel> model;
  Counters counters;
  bool circulant = false;
  Diagnostics diagnostics;
};

enum class KernelMode { Serial, Parallel };

/// Double average of x_j x_k over samples and the ordered mark pairs at each
/// distance. The observation pattern is the ruler; throws std::invalid_argument
/// if it does not realize every distance.
EstimateReport estimate_by_ruler(const ObservationSet& obs, KernelMode mode = KernelMode::Parallel);

/// Per-frequency power (1/n) sum_l |(F^* x_l)_j|^2 with F the unitary DFT.
Vector circulant_spectrum(const CMatrix& samples);

/// Circulant estimate F diag(spectrum) F^*, returned as its first column. Needs
/// every coordinate observed.
EstimateReport estimate_circulant(const ObservationSet& obs);

/// Folds a recovered frequency set into a conjugate-closed model with the same
/// real part: paired weights are averaged, unpaired ones split over f and 1-f.
FrequencyModel conjugate_closure(int d, const std::vector<double>& freqs, const std::vector<double>& weights,
                                 double freq_tol = 1e-7);

struct PronyExactOptions {
  double cluster_tol = 1e-6;  ///< circular distance at which two root sets agree
};

/// Shared frequencies from the first sample's decomposition, per-sample amplitudes
/// from the k x k Vandermonde system, D_l = mean |y_l|^2. Pattern must be 1..2k.
EstimateReport estimate_prony_exact(const ObservationSet& obs, int k, const PronyExactOptions& opts = {});

/// Reconstructs each sample from its 2k entries and averages the reconstructions
/// with the full ruler.
EstimateReport estimate_prony_denoise(const ObservationSet& obs, int k, double beta);

struct PronyConditionedOptions {
  double separation_constant = 0.25;  ///< cluster radius = c / sqrt(d kappa), chord distance
  std::optional<double> beta;         ///< overrides the default accuracy parameter
};

/// k (ceil(log2 d) + ceil(log2(kappa/eps)) + 3), so the snap grid is eps/(d kappa).
double conditioned_beta(int d, int k, double kappa, double eps);
double conditioned_cluster_radius(int d, double kappa, double separation_constant = 0.25);

/// Roots of all samples clustered into one shared set, D_l = mean |y_l|^2.
EstimateReport estimate_prony_conditioned(const ObservationSet& obs, int k, double kappa, double eps,
                                          const PronyConditionedOptions& opts = {});

struct SftOptions {
  int m = 1;
  double net_step = std::numeric_limits<double>::quiet_NaN();  ///< default 1/(4d)
  double c1 = 4.0;            ///< sketch accuracy eps = 1/c1
  double c2 = 10.0;           ///< sketch failure probability delta = alpha^m / c2 (floored)
  double oversampling = 8.0;  ///< leverage sampling constant
  long candidate_cap = 1000000;
  bool randomized_fallback = false;
  long randomized_candidates = 100000;
  std::uint64_t seed = 1;
};

/// The two leverage sketches and the coordinates they read.
struct SftPlan {
  int d = 0;
  SftOptions options;
  double net_step = 0.0;
  SamplingMatrix s1;
  SamplingMatrix s2;
  std::vector<int> pattern;  ///< union of s1 and s2 indices
};

SftPlan plan_sft(int d, const SftOptions& opts);

/// Number of size-m multisets from a net of `net_points` frequencies.
long multiset_count(long net_points, int m);

/// Exhaustive search over sorted m-tuples of net frequencies, two-sided sketched
/// regression per candidate, output avg(F_M W F_M^*) for the best residual.
EstimateReport estimate_sft(const ObservationSet& obs, const SftPlan& plan);

/// Sketched residual of one candidate frequency tuple (for certificates in tests).
double sft_candidate_residual(const ObservationSet& obs, const SftPlan& plan, const std::vector<double>& freqs);

}  // namespace toepcov
