#include "toepcov/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "toepcov/rng.hpp"
#include "toepcov/rulers.hpp"
#include "toepcov/sampling.hpp"

namespace toepcov::bench {

using nlohmann::json;

GeneratorKind parse_generator(const std::string& name) {
  if (name == "identity") return GeneratorKind::Identity;
  if (name == "random-full") return GeneratorKind::RandomFull;
  if (name == "lowrank") return GeneratorKind::LowRank;
  throw std::invalid_argument("unknown matrix generator '" + name + "' (identity | random-full | lowrank)");
}

std::string generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Identity: return "identity";
    case GeneratorKind::RandomFull: return "random-full";
    case GeneratorKind::LowRank: return "lowrank";
  }
  return "unknown";
}

FrequencyModel random_model(int d, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > d) throw std::invalid_argument("random_model: rank must lie in [1, d]");
  CounterRng rng(seed, 0);
  FrequencyModel fm;
  fm.d = d;
  if (rank % 2 == 1) {
    fm.freqs.push_back(0.0);
    fm.weights.push_back(-std::log(rng.next_uniform()));
  }
  for (int p = 0; p < rank / 2; ++p) {
    // Strictly inside (0, 1/2) so the pair is two distinct frequencies.
    double f = 0.0;
    do f = 0.5 * rng.next_uniform();
    while (f <= kFreqTol || f >= 0.5 - kFreqTol);
    const double w = -std::log(rng.next_uniform());
    fm.freqs.push_back(f);
    fm.weights.push_back(w);
    fm.freqs.push_back(1.0 - f);
    fm.weights.push_back(w);
  }
  double total = 0.0;
  for (double w : fm.weights) total += w;
  for (double& w : fm.weights) w /= total;
  return fm;
}

ToeplitzVector generate_matrix(GeneratorKind kind, int d, int k, std::uint64_t seed) {
  switch (kind) {
    case GeneratorKind::Identity: return ToeplitzVector::identity(d);
    case GeneratorKind::RandomFull: return synthesize(random_model(d, d, seed));
    case GeneratorKind::LowRank: return synthesize(random_model(d, k, seed));
  }
  throw std::invalid_argument("generate_matrix: unknown kind");
}

MethodSpec method_from_json(const json& j) {
  MethodSpec m;
  if (j.is_string()) {
    m.name = j.get<std::string>();
    return m;
  }
  m.name = j.at("name").get<std::string>();
  if (j.contains("alpha")) m.alpha = j.at("alpha").get<double>();
  if (j.contains("k")) m.k = j.at("k").get<int>();
  if (j.contains("beta")) m.beta = j.at("beta").get<double>();
  if (j.contains("kappa")) m.kappa = j.at("kappa").get<double>();
  if (j.contains("eps")) m.eps = j.at("eps").get<double>();
  if (j.contains("m")) m.sft.m = j.at("m").get<int>();
  if (j.contains("net_step")) m.sft.net_step = j.at("net_step").get<double>();
  if (j.contains("c1")) m.sft.c1 = j.at("c1").get<double>();
  if (j.contains("c2")) m.sft.c2 = j.at("c2").get<double>();
  if (j.contains("oversampling")) m.sft.oversampling = j.at("oversampling").get<double>();
  if (j.contains("candidate_cap")) m.sft.candidate_cap = j.at("candidate_cap").get<long>();
  if (j.contains("randomized_fallback")) m.sft.randomized_fallback = j.at("randomized_fallback").get<bool>();
  return m;
}

json method_to_json(const MethodSpec& m) {
  json j{{"name", m.name}};
  if (!std::isnan(m.alpha)) j["alpha"] = m.alpha;
  if (m.name.rfind("prony", 0) == 0) j["k"] = m.k;
  if (m.beta) j["beta"] = *m.beta;
  if (m.name == "prony-cond") {
    j["kappa"] = m.kappa;
    j["eps"] = m.eps;
  }
  if (m.name == "sft") {
    j["m"] = m.sft.m;
    if (!std::isnan(m.sft.net_step)) j["net_step"] = m.sft.net_step;
  }
  return j;
}

Instance make_instance(const ToeplitzVector& truth) {
  Instance inst;
  inst.d = truth.dim();
  inst.truth = truth;
  inst.factor = sqrt_factor(truth);
  inst.rank = inst.factor.cols() == 1 && inst.factor.isZero(0.0) ? 0 : static_cast<int>(inst.factor.cols());
  inst.norm = spectral_norm(truth).value;
  return inst;
}

namespace {

double default_beta(int k) { return k * 33.0; }

}  // namespace

SftOptions sft_options_for(const MethodSpec& method, std::uint64_t seed) {
  SftOptions opts = method.sft;
  opts.seed = derive_seed(seed, 0x5f7);
  return opts;
}

std::vector<int> method_pattern(const MethodSpec& method, int d, std::uint64_t seed) {
  const std::string& name = method.name;
  if (name == "full" || name == "circulant") return full_ruler(d).indices();
  if (name == "sqrt-ruler") return sqrt_ruler(d).indices();
  if (name == "alpha-ruler") {
    if (std::isnan(method.alpha)) throw std::invalid_argument("alpha-ruler needs an alpha");
    return alpha_ruler(d, method.alpha).indices();
  }
  if (name == "prony" || name == "prony-denoise" || name == "prony-cond") {
    if (2 * method.k > d) throw std::invalid_argument(name + ": need 2k <= d");
    return prefix_pattern(2 * method.k);
  }
  if (name == "sft") return plan_sft(d, sft_options_for(method, seed)).pattern;
  throw std::invalid_argument("unknown method '" + name + "'");
}

ColumnScale method_scale(const MethodSpec& method) {
  return method.name == "sft" ? ColumnScale::InvSqrtN : ColumnScale::Unit;
}

EstimateReport estimate_observed(const ObservationSet& obs, const MethodSpec& method, std::uint64_t seed) {
  const std::string& name = method.name;
  EstimateReport report;
  if (name == "full" || name == "sqrt-ruler" || name == "alpha-ruler") {
    report = estimate_by_ruler(obs);
  } else if (name == "circulant") {
    report = estimate_circulant(obs);
  } else if (name == "prony") {
    report = estimate_prony_exact(obs, method.k);
  } else if (name == "prony-denoise") {
    report = estimate_prony_denoise(obs, method.k, method.beta.value_or(default_beta(method.k)));
  } else if (name == "prony-cond") {
    PronyConditionedOptions opts;
    opts.beta = method.beta;
    report = estimate_prony_conditioned(obs, method.k, method.kappa, method.eps, opts);
  } else if (name == "sft") {
    report = estimate_sft(obs, plan_sft(obs.d(), sft_options_for(method, seed)));
  } else {
    throw std::invalid_argument("unknown method '" + name + "'");
  }
  report.method = name;
  return report;
}

EstimateReport run_estimator(const Instance& inst, const MethodSpec& method, long n, std::uint64_t seed) {
  if (n < 1 || n > std::numeric_limits<int>::max()) throw std::invalid_argument("run_estimator: n out of range");
  const ObservationSet obs =
      observe_draw(inst.factor, method_pattern(method, inst.d, seed), static_cast<int>(n), seed, method_scale(method));
  return estimate_observed(obs, method, seed);
}

BenchRecord run_trial(const Instance& inst, const MethodSpec& method, long n, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  try {
    report = run_estimator(inst, method, n, seed);
  } catch (const std::exception& e) {
    throw std::runtime_error(method.name + ": " + e.what());
  }
  const auto stop = std::chrono::steady_clock::now();

  BenchRecord rec;
  rec.method = method.name;
  rec.d = inst.d;
  rec.k = inst.rank;
  if (method.name == "alpha-ruler") rec.alpha = method.alpha;
  rec.n = n;
  rec.esc = report.counters.esc;
  rec.tsc = report.counters.tsc;
  const double err = spectral_norm(report.t_hat - inst.truth).value;
  rec.rel_err = inst.norm > 0.0 ? err / inst.norm : err;
  rec.seed = seed;
  rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int d, int trial) {
  return derive_seed(derive_seed(base_seed, static_cast<std::uint64_t>(d)), static_cast<std::uint64_t>(trial));
}

std::vector<BenchRecord> run_point(const Instance& inst, const MethodSpec& method, long n, int trials,
                                   std::uint64_t base_seed, int workers) {
  if (trials < 1) throw std::invalid_argument("run_point: trials must be >= 1");
  std::vector<BenchRecord> records(static_cast<std::size_t>(trials));
  std::string error;
#pragma omp parallel for num_threads(std::max(workers, 1)) schedule(dynamic, 1)
  for (int t = 0; t < trials; ++t) {
    try {
      records[static_cast<std::size_t>(t)] = run_trial(inst, method, n, trial_seed(base_seed, inst.d, t));
    } catch (const std::exception& e) {
#pragma omp critical(toepcov_bench_error)
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return records;
}

double median_rel_err(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw std::invalid_argument("median_rel_err: no records");
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.rel_err);
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

TscResult tsc_to_target(const Instance& inst, const MethodSpec& method, double eps, const LadderOptions& opts) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("tsc_to_target: eps must lie in (0, 1]");
  TscResult result;
  std::map<long, std::vector<BenchRecord>> cache;
  auto evaluate = [&](long n) {
    auto it = cache.find(n);
    if (it == cache.end()) {
      it = cache.emplace(n, run_point(inst, method, n, opts.trials, opts.base_seed, opts.workers)).first;
      result.evaluations.emplace_back(n, median_rel_err(it->second));
    }
    return median_rel_err(it->second);
  };

  long lo = 0;
  long hi = std::max(1L, opts.n_start);
  while (evaluate(hi) > eps) {
    lo = hi;
    if (hi > opts.n_cap / 2) {
      result.unbounded = true;
      result.n = hi;
      result.median = evaluate(hi);
      result.records = cache.at(hi);
      result.esc = result.records.front().esc;
      result.tsc = result.records.front().tsc;
      return result;
    }
    hi *= 2;
  }
  while (hi - lo > std::max(1L, hi / std::max(1L, opts.resolution)) && lo > 0) {
    const long mid = lo + (hi - lo) / 2;
    if (evaluate(mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.n = hi;
  result.median = evaluate(hi);
  result.records = cache.at(hi);
  result.esc = result.records.front().esc;
  result.tsc = result.records.front().tsc;
  return result;
}

void SweepConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep config: trials must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("sweep config: eps must lie in (0, 1]");
  if (dims.empty()) throw std::invalid_argument("sweep config: no dimensions");
  if (methods.empty()) throw std::invalid_argument("sweep config: no methods");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("sweep config: dimensions must be positive");
  if (mode == "fixed") {
    if (ns.empty()) throw std::invalid_argument("sweep config: fixed mode needs a list of n");
    for (long n : ns)
      if (n < 1) throw std::invalid_argument("sweep config: n must be positive");
  } else if (mode != "tsc") {
    throw std::invalid_argument("sweep config: mode must be 'fixed' or 'tsc'");
  }
  if (matrix.kind == GeneratorKind::LowRank && matrix.k < 1) throw std::invalid_argument("sweep config: lowrank needs k >= 1");
}

SweepConfig sweep_from_json(const json& j) {
  SweepConfig c;
  const json& m = j.at("matrix");
  c.matrix.kind = parse_generator(m.at("kind").get<std::string>());
  c.matrix.k = m.value("k", 0);
  c.matrix.seed = m.value("seed", std::uint64_t{1});
  c.dims = j.at("d").get<std::vector<int>>();
  for (const auto& mj : j.at("methods")) c.methods.push_back(method_from_json(mj));
  c.mode = j.value("mode", std::string("fixed"));
  if (j.contains("n")) c.ns = j.at("n").get<std::vector<long>>();
  c.eps = j.value("eps", 0.5);
  c.trials = j.value("trials", 5);
  c.base_seed = j.value("seed", std::uint64_t{1});
  c.n_cap = j.value("n_cap", 1L << 22);
  c.n_start = j.value("n_start", 1L);
  c.resolution = j.value("resolution", 16L);
  c.validate();
  return c;
}

SweepResult run_sweep(const SweepConfig& config, int workers) {
  config.validate();
  SweepResult out;
  out.summary = json::array();
  for (int d : config.dims) {
    const int k = config.matrix.kind == GeneratorKind::LowRank ? std::min(config.matrix.k, d) : d;
    Instance inst = make_instance(generate_matrix(config.matrix.kind, d, k, derive_seed(config.matrix.seed, static_cast<std::uint64_t>(d))));
    inst.rank = k;  // nominal rank; the factor may drop numerically null directions
    for (const MethodSpec& method : config.methods) {
      if (config.mode == "fixed") {
        for (long n : config.ns) {
          auto recs = run_point(inst, method, n, config.trials, config.base_seed, workers);
          out.records.insert(out.records.end(), recs.begin(), recs.end());
        }
      } else {
        LadderOptions lo;
        lo.n_start = config.n_start;
        lo.n_cap = config.n_cap;
        lo.resolution = config.resolution;
        lo.trials = config.trials;
        lo.base_seed = config.base_seed;
        lo.workers = workers;
        const TscResult res = tsc_to_target(inst, method, config.eps, lo);
        out.records.insert(out.records.end(), res.records.begin(), res.records.end());
        json ladder = json::array();
        for (const auto& [n, med] : res.evaluations) ladder.push_back({n, med});
        out.summary.push_back({{"method", method.name}, {"d", d}, {"n", res.n}, {"esc", res.esc}, {"tsc", res.tsc},
                               {"median_rel_err", res.median}, {"unbounded", res.unbounded}, {"ladder", ladder}});
      }
    }
  }
  sort_records(out.records);
  return out;
}

void sort_records(std::vector<BenchRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.method, a.d, a.n, a.seed) < std::tie(b.method, b.d, b.n, b.seed);
  });
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << r.method << ',' << r.d << ',' << r.k << ',' << (r.alpha ? fmt(*r.alpha) : std::string()) << ',' << r.n << ','
        << r.esc << ',' << r.tsc << ',' << fmt(r.rel_err) << ',' << r.seed << ',' << fmt(r.wall_ms) << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace toepcov::bench
