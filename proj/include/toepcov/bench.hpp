#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toepcov/estimators.hpp"
#include "toepcov/toeplitz.hpp"

namespace toepcov::bench {

enum class GeneratorKind { Identity, RandomFull, LowRank };

GeneratorKind parse_generator(const std::string& name);
std::string generator_name(GeneratorKind kind);

/// identity: a = e_0. random-full: floor(d/2) conjugate pairs (plus f = 0 when d is
/// odd) drawn uniformly, unit-exponential weights, normalized so a_0 = 1.
/// lowrank: the same with k frequencies instead of d.
FrequencyModel random_model(int d, int rank, std::uint64_t seed);
ToeplitzVector generate_matrix(GeneratorKind kind, int d, int k, std::uint64_t seed);

struct MethodSpec {
  std::string name;  ///< full | sqrt-ruler | alpha-ruler | circulant | prony | prony-denoise | prony-cond | sft
  double alpha = std::numeric_limits<double>::quiet_NaN();
  int k = 1;
  std::optional<double> beta;
  double kappa = 1.0;
  double eps = 0.1;
  SftOptions sft;
};

MethodSpec method_from_json(const nlohmann::json& j);
nlohmann::json method_to_json(const MethodSpec& m);

/// A ground-truth covariance together with its sampling factor and norm.
struct Instance {
  int d = 0;
  int rank = 0;  ///< reported as k; make_instance sets the factor's column count
  ToeplitzVector truth;
  Matrix factor;
  double norm = 0.0;
};

Instance make_instance(const ToeplitzVector& truth);

struct BenchRecord {
  std::string method;
  int d = 0;
  int k = 0;
  std::optional<double> alpha;
  long n = 0;
  long esc = 0;
  long tsc = 0;
  double rel_err = 0.0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

/// Observation pattern the method reads from each vector. For sft the pattern
/// depends on the trial seed through the leverage sketches.
std::vector<int> method_pattern(const MethodSpec& method, int d, std::uint64_t seed);

/// The method's sft options with the sketch seed derived from the trial seed.
SftOptions sft_options_for(const MethodSpec& method, std::uint64_t seed);

/// Column scaling the method expects (sft reads 1/sqrt(n)-scaled vectors).
ColumnScale method_scale(const MethodSpec& method);

/// Runs the method on observations whose pattern is method_pattern(method, d, seed).
EstimateReport estimate_observed(const ObservationSet& obs, const MethodSpec& method, std::uint64_t seed);

/// Draws n samples with the given seed and runs the estimator.
EstimateReport run_estimator(const Instance& inst, const MethodSpec& method, long n, std::uint64_t seed);
BenchRecord run_trial(const Instance& inst, const MethodSpec& method, long n, std::uint64_t seed);

/// Seed of trial `trial` at dimension d; shared by all methods and all n so that
/// comparisons use common random numbers.
std::uint64_t trial_seed(std::uint64_t base_seed, int d, int trial);

/// One record per trial, in trial order. Trials run on `workers` OpenMP threads.
std::vector<BenchRecord> run_point(const Instance& inst, const MethodSpec& method, long n, int trials,
                                   std::uint64_t base_seed, int workers = 1);

double median_rel_err(const std::vector<BenchRecord>& records);

struct LadderOptions {
  long n_start = 1;
  long n_cap = 1L << 22;
  /// Bisection stops once hi - lo <= max(1, hi / resolution).
  long resolution = 16;
  int trials = 9;
  std::uint64_t base_seed = 1;
  int workers = 1;
};

struct TscResult {
  long n = 0;
  long esc = 0;
  long tsc = 0;
  double median = 0.0;
  bool unbounded = false;
  std::vector<std::pair<long, double>> evaluations;  ///< (n, median rel_err) in evaluation order
  std::vector<BenchRecord> records;                  ///< trials at the selected n
};

/// Smallest n on a doubling-then-bisection ladder whose median error is <= eps.
TscResult tsc_to_target(const Instance& inst, const MethodSpec& method, double eps, const LadderOptions& opts);

struct MatrixGenSpec {
  GeneratorKind kind = GeneratorKind::Identity;
  int k = 0;
  std::uint64_t seed = 1;
};

struct SweepConfig {
  MatrixGenSpec matrix;
  std::vector<int> dims;
  std::vector<MethodSpec> methods;
  std::string mode = "fixed";  ///< fixed | tsc
  std::vector<long> ns;        ///< fixed mode
  double eps = 0.5;            ///< tsc mode
  int trials = 5;
  std::uint64_t base_seed = 1;
  long n_cap = 1L << 22;
  long n_start = 1;
  long resolution = 16;

  /// Throws std::invalid_argument on a config that cannot run.
  void validate() const;
};

SweepConfig sweep_from_json(const nlohmann::json& j);

struct SweepResult {
  std::vector<BenchRecord> records;
  nlohmann::json summary;  ///< per (method, d) ladder outcome in tsc mode
};

SweepResult run_sweep(const SweepConfig& config, int workers = 1);

/// Sorted by (method, d, n, seed).
void sort_records(std::vector<BenchRecord>& records);
inline constexpr const char* kCsvHeader = "method,d,k,alpha,n,esc,tsc,rel_err,seed,wall_ms";
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace toepcov::bench
