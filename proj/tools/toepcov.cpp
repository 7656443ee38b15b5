#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "toepcov/bench.hpp"
#include "toepcov/estimators.hpp"
#include "toepcov/leverage.hpp"
#include "toepcov/rulers.hpp"
#include "toepcov/sampling.hpp"
#include "toepcov/spec_io.hpp"

using nlohmann::json;
using namespace toepcov;

namespace {

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

json diagnostics_json(const Diagnostics& g) {
  json j{{"rank_reductions", g.rank_reductions},
         {"frequency_disagreements", g.frequency_disagreements},
         {"clusters", g.clusters},
         {"numerical_rank", g.numerical_rank},
         {"conditioning_warning", g.conditioning_warning},
         {"max_hankel_condition", g.max_hankel_condition},
         {"net_size", g.net_size},
         {"candidates_evaluated", g.candidates_evaluated},
         {"imag_mass_ratio", g.imag_mass_ratio},
         {"realification_warning", g.realification_warning},
         {"randomized_search", g.randomized_search}};
  // json has no NaN; leave unset fields out.
  if (!std::isnan(g.reconstruction_residual)) j["reconstruction_residual"] = g.reconstruction_residual;
  if (!std::isnan(g.c_best)) j["c_best"] = g.c_best;
  return j;
}

json sampling_json(const SamplingMatrix& s) {
  return {{"indices", s.indices}, {"probabilities", s.probabilities}, {"scales", s.scales}, {"seed", s.seed}};
}

json profile_json(const LeverageProfile& p) {
  return {{"d", p.d}, {"s", p.s}, {"tau_bar", p.tau_bar}, {"sum", p.sum()},
          {"sum_ceiling", leverage_sum_ceiling(p.d, p.s)}};
}

int cmd_ruler(int d, const std::string& kind, double alpha, bool json_only) {
  Ruler r = kind == "full"    ? full_ruler(d)
            : kind == "sqrt"  ? sqrt_ruler(d)
            : kind == "alpha" ? alpha_ruler(d, alpha)
                              : throw std::invalid_argument("--kind must be full, sqrt or alpha");
  const double delta = coverage_coefficient(r);
  double bound = 0.0;
  if (kind == "full") bound = full_coverage_bound(d);
  else bound = alpha_coverage_bound(d, kind == "sqrt" ? 0.5 : alpha) + r.repair_slack();

  json doc{{"d", d}, {"kind", kind}, {"indices", r.indices()}, {"size", r.size()}, {"delta", delta},
           {"bound", bound}, {"repair_slack", r.repair_slack()}};
  if (kind == "alpha") doc["alpha"] = alpha;
  if (!json_only) {
    std::ostringstream marks;
    for (std::size_t i = 0; i < r.indices().size(); ++i) marks << (i ? " " : "") << r.indices()[i];
    std::printf("%-14s %s\n", "kind", kind.c_str());
    std::printf("%-14s %d\n", "d", d);
    if (kind == "alpha") std::printf("%-14s %g\n", "alpha", alpha);
    std::printf("%-14s %d\n", "size", r.size());
    std::printf("%-14s %.9g\n", "delta", delta);
    std::printf("%-14s %.9g\n", "bound", bound);
    std::printf("%-14s %d\n", "repair_slack", r.repair_slack());
    std::printf("%-14s %s\n\n", "indices", marks.str().c_str());
  }
  std::cout << doc.dump(2) << '\n';
  return 0;
}

struct EstimateArgs {
  std::string spec;
  bench::MethodSpec method;
  long n = 0;
  std::uint64_t seed = 1;
  std::string dump_leverage;
  std::string dump_batch;
};

int cmd_estimate(EstimateArgs& a) {
  const MatrixSpec spec = load_matrix_spec(a.spec);
  const bench::Instance inst = bench::make_instance(spec.truth());
  if (a.n < 1 || a.n > std::numeric_limits<int>::max()) throw std::invalid_argument("--n out of range");
  const int n = static_cast<int>(a.n);
  const std::vector<int> pattern = bench::method_pattern(a.method, inst.d, a.seed);
  const ColumnScale scale = bench::method_scale(a.method);

  const auto start = std::chrono::steady_clock::now();
  std::optional<ObservationSet> obs;
  if (!a.dump_batch.empty()) {
    const SampleBatch batch = draw_samples(inst.factor, n, a.seed, scale);
    std::ofstream out(a.dump_batch, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + a.dump_batch);
    write_batch(out, batch);
    obs.emplace(observe(batch, pattern));
  } else {
    obs.emplace(observe_draw(inst.factor, pattern, n, a.seed, scale));
  }
  const EstimateReport rep = bench::estimate_observed(*obs, a.method, a.seed);
  const auto stop = std::chrono::steady_clock::now();

  const double err = spectral_norm(rep.t_hat - inst.truth).value;
  json doc{{"method", rep.method},
           {"params", bench::method_to_json(a.method)},
           {"d", inst.d},
           {"n", a.n},
           {"seed", a.seed},
           {"t_hat", rep.t_hat.to_std()},
           {"rel_err", inst.norm > 0.0 ? err / inst.norm : err},
           {"abs_err", err},
           {"esc", rep.counters.esc},
           {"vsc", rep.counters.vsc},
           {"tsc", rep.counters.tsc},
           {"wall_ms", std::chrono::duration<double, std::milli>(stop - start).count()},
           {"circulant", rep.circulant},
           {"diagnostics", diagnostics_json(rep.diagnostics)}};
  if (rep.model) doc["model"] = {{"freqs", rep.model->freqs}, {"weights", rep.model->weights}};
  std::cout << doc.dump(2) << '\n';

  if (!a.dump_leverage.empty()) {
    json lev;
    if (a.method.name == "sft") {
      const SftOptions opts = bench::sft_options_for(a.method, a.seed);
      const SftPlan plan = plan_sft(inst.d, opts);
      lev = {{"profile", profile_json(fourier_leverage_bound(inst.d, std::min(2 * opts.m, inst.d)))},
             {"s1", sampling_json(plan.s1)},
             {"s2", sampling_json(plan.s2)}};
    } else {
      const int s = a.method.name.rfind("prony", 0) == 0 ? a.method.k : std::max(1, inst.rank);
      lev = {{"profile", profile_json(fourier_leverage_bound(inst.d, std::min(s, inst.d)))}};
    }
    write_json(lev, a.dump_leverage);
  }
  return 0;
}

int cmd_gen(const std::string& kind_name, int d, int k, std::uint64_t seed, const std::string& out) {
  const bench::GeneratorKind kind = bench::parse_generator(kind_name);
  if (d < 1) throw std::invalid_argument("--d must be positive");
  MatrixSpec spec;
  if (kind == bench::GeneratorKind::Identity) {
    spec = MatrixSpec::from_toeplitz(ToeplitzVector::identity(d));
  } else {
    if (kind == bench::GeneratorKind::LowRank && k < 1) throw std::invalid_argument("lowrank needs --k >= 1");
    spec = MatrixSpec::from_model(bench::random_model(d, kind == bench::GeneratorKind::LowRank ? k : d, seed));
  }
  write_json(spec.to_json(), out);
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_path, int workers, const std::string& summary) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  const bench::SweepConfig config = bench::sweep_from_json(json::parse(in));
  const bench::SweepResult res = bench::run_sweep(config, workers);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  bench::write_csv(out, res.records);
  if (!summary.empty()) write_json(res.summary, summary);
  std::cerr << res.records.size() << " records written to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz covariance estimation from sampled entries"};
  app.require_subcommand(1);

  int d = 0;
  std::string kind;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  bool json_only = false;
  auto* ruler = app.add_subcommand("ruler", "Build a ruler and report its coverage");
  ruler->add_option("--d", d, "dimension")->required()->check(CLI::PositiveNumber);
  ruler->add_option("--kind", kind, "full | sqrt | alpha")->required()->check(CLI::IsMember({"full", "sqrt", "alpha"}));
  ruler->add_option("--alpha", alpha, "exponent in [1/2, 1] for --kind alpha");
  ruler->add_flag("--json", json_only, "print only the JSON document");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate a covariance from simulated samples");
  estimate->add_option("--spec", est.spec, "matrix spec JSON")->required()->check(CLI::ExistingFile);
  estimate->add_option("--method", est.method.name)
      ->required()
      ->check(CLI::IsMember({"full", "sqrt-ruler", "alpha-ruler", "circulant", "prony", "prony-denoise", "prony-cond", "sft"}));
  estimate->add_option("--n", est.n, "number of vectors")->required();
  estimate->add_option("--seed", est.seed, "sample seed");
  estimate->add_option("--alpha", est.method.alpha, "alpha-ruler exponent");
  estimate->add_option("--k", est.method.k, "prony: number of frequencies");
  estimate->add_option("--beta", est.method.beta, "prony-denoise / prony-cond accuracy parameter");
  estimate->add_option("--kappa", est.method.kappa, "prony-cond condition bound");
  estimate->add_option("--eps", est.method.eps, "prony-cond target accuracy");
  estimate->add_option("--m", est.method.sft.m, "sft: model order");
  estimate->add_option("--net-step", est.method.sft.net_step, "sft: frequency net step (default 1/(4d))");
  estimate->add_option("--c1", est.method.sft.c1, "sft: sketch accuracy constant");
  estimate->add_option("--c2", est.method.sft.c2, "sft: sketch failure constant");
  estimate->add_option("--oversampling", est.method.sft.oversampling, "sft: leverage sampling constant");
  estimate->add_option("--candidate-cap", est.method.sft.candidate_cap, "sft: largest exhaustive search");
  estimate->add_flag("--randomized-fallback", est.method.sft.randomized_fallback, "sft: sample candidates past the cap");
  estimate->add_option("--dump-leverage", est.dump_leverage, "write leverage profiles as JSON");
  estimate->add_option("--dump-batch", est.dump_batch, "write the full sample batch in binary");

  std::string gen_kind, gen_out;
  int gen_d = 0, gen_k = 0;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a matrix spec");
  gen->add_option("--kind", gen_kind)->required()->check(CLI::IsMember({"identity", "random-full", "lowrank"}));
  gen->add_option("--d", gen_d)->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k, "rank for lowrank");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();

  std::string cfg, csv, summary;
  int workers = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Run a parameter sweep");
  bench_cmd->add_option("--config", cfg)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", csv)->required();
  bench_cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--summary", summary, "write per-point ladder outcomes as JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ruler) return cmd_ruler(d, kind, alpha, json_only);
    if (*estimate) return cmd_estimate(est);
    if (*gen) return cmd_gen(gen_kind, gen_d, gen_k, gen_seed, gen_out);
    if (*bench_cmd) return cmd_bench(cfg, csv, workers, summary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
