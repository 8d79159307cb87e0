// lidreg: generate batch data, decode it, and run seeded benchmarks.
#include "lidreg/clipping.hpp"
#include "lidreg/errors.hpp"
#include "lidreg/eval.hpp"
#include "lidreg/io.hpp"
#include "lidreg/list_decoder.hpp"
#include "lidreg/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

namespace {

using namespace lidreg;

enum Exit { kOk = 0, kFailed = 1, kArgument = 2, kDataFormat = 3, kIncomplete = 4 };

struct Options {
  std::string config;
  std::string data;
  std::string out;
  std::optional<std::uint64_t> seed;
  int trials = 1;
  std::string format = "json";
  unsigned jobs = 1;
  bool timing = false;
};

FlatConfig load_config(const Options& o) {
  if (o.config.empty()) return {};
  FlatConfig flat = read_flat_config(o.config);
  check_known_keys(flat);
  return flat;
}

AlgoConfig algo_config(const FlatConfig& flat, const Options& o) {
  AlgoConfig cfg = algo_config_from_flat(flat);
  if (o.seed) cfg.rng_seed = *o.seed;
  cfg.validate();
  return cfg;
}

GeneratorSpec generator_spec(FlatConfig flat, const Options& o) {
  if (o.seed) flat["seed"] = std::to_string(*o.seed);
  GeneratorSpec spec = generator_spec_from_flat(flat);
  spec.validate();
  return spec;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + o.out);
  f << text;
}

BatchCollection load_or_generate(const FlatConfig& flat, const Options& o) {
  if (!o.data.empty()) return read_batches_csv(std::filesystem::path(o.data));
  if (o.config.empty()) throw ArgumentError("either --data or --config is required");
  return generate(generator_spec(flat, o)).coll;
}

int cmd_gen(const Options& o) {
  const GeneratorSpec spec = generator_spec(load_config(o), o);
  const LabeledCollection data = generate(spec);
  std::ostringstream text;
  write_batches_csv(text, data.coll);
  emit(o, text.str());
  return kOk;
}

int cmd_run(const Options& o) {
  const FlatConfig flat = load_config(o);
  const AlgoConfig cfg = algo_config(flat, o);
  const BatchCollection coll = load_or_generate(flat, o);
  const RunResult r = run(coll, cfg);
  emit(o, o.format == "csv" ? run_result_to_csv(r) : run_result_to_json(r, cfg));
  return r.complete ? kOk : kIncomplete;
}

int cmd_bench(const Options& o) {
  if (o.config.empty()) throw ArgumentError("bench needs --config");
  const FlatConfig flat = load_config(o);
  const GeneratorSpec spec = generator_spec(flat, o);
  const AlgoConfig cfg = algo_config(flat, o);
  ExperimentOptions opts;
  opts.trials = o.trials;
  opts.jobs = o.jobs;
  opts.timing = o.timing;
  const ExperimentSummary s = run_experiment(spec, cfg, opts);
  emit(o, o.format == "csv" ? summary_to_csv(s, o.timing) : summary_to_json(s, o.timing));
  const bool complete = std::all_of(s.per_trial.begin(), s.per_trial.end(), [](const Metrics& m) { return m.complete; });
  return complete ? kOk : kIncomplete;
}

// Re-derives the guarantees of every returned triplet from scratch.
int cmd_check(const Options& o) {
  const FlatConfig flat = load_config(o);
  const AlgoConfig cfg = algo_config(flat, o);
  const BatchCollection coll = load_or_generate(flat, o);
  const RunResult r = run(coll, cfg);
  const double m = static_cast<double>(coll.size());
  const ClipConstants a = compute_a_constants(cfg, coll.batch_size());
  const double tol = stationary_tolerance(cfg, coll.batch_size());

  std::ostringstream text;
  int failures = 0;
  auto report = [&](bool ok, const std::string& what) {
    failures += ok ? 0 : 1;
    text << (ok ? "PASS " : "FAIL ") << what << '\n';
  };

  const double list_cap = std::ceil(4.0 / (cfg.alpha * cfg.alpha));
  report(static_cast<double>(r.M.size()) <= list_cap,
         "list size " + std::to_string(r.M.size()) + " <= " + format_double(list_cap));
  for (std::size_t k = 0; k < r.M.size(); ++k) {
    const Triplet& t = r.M[k];
    const std::string tag = "triplet " + std::to_string(k) + ": ";
    report(t.beta.total() >= cfg.alpha * m / 2.0, tag + "weight " + format_double(t.beta.total()) + " >= alpha m / 2");
    const double loss = weighted_clipped_loss(coll, t.beta, t.w, t.kappa);
    const double floor = std::max(a.a1 * std::sqrt(std::max(loss, 0.0)), a.a2 * cfg.sigma);
    report(floor <= t.kappa * (1 + 1e-12) && t.kappa <= 2.0 * floor * (1 + 1e-12),
           tag + "kappa " + format_double(t.kappa) + " within [1, 2] x max{a1 sqrt(E f), a2 sigma} = " +
               format_double(floor));
    const double g = weighted_clipped_grad(coll, t.beta, t.w, t.kappa).norm();
    report(g <= tol, tag + "gradient norm " + format_double(g) + " <= " + format_double(tol));
  }
  for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
    const auto& d = r.diagnostics[i];
    if (d.child_weights.empty()) continue;
    double sq = 0.0;
    for (double w : d.child_weights) sq += w * w;
    report(sq <= d.cluster_weight * d.cluster_weight * (1.0 + 1e-12),
           "filter " + std::to_string(i) + ": squared child weights " + format_double(sq) + " <= " +
               format_double(d.cluster_weight * d.cluster_weight));
  }
  report(r.complete, "run finished within the filter budget");
  text << (failures ? "FAILED " : "OK ") << failures << " violation(s)\n";
  emit(o, text.str());
  if (!r.complete) return kIncomplete;
  return failures ? kFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List-decodable linear regression from batches"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path (stdout when omitted)");
    sub->add_option("--seed", seed, "overrides the seeds in the config");
  };

  CLI::App* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
  common(gen);
  CLI::App* run = app.add_subcommand("run", "decode a dataset (or a generated one) into a candidate list");
  common(run);
  run->add_option("--data", o.data, "batch CSV")->check(CLI::ExistingFile);
  run->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  CLI::App* bench = app.add_subcommand("bench", "seeded trial sweep with aggregate metrics");
  common(bench);
  bench->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  bench->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--jobs", o.jobs, "worker threads (0 = hardware concurrency)");
  bench->add_flag("--timing", o.timing, "include wall-clock time per trial");
  CLI::App* check = app.add_subcommand("check", "decode and re-verify the guarantees of every output");
  common(check);
  check->add_option("--data", o.data, "batch CSV")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }
  for (CLI::App* sub : {gen, run, bench, check}) {
    if (sub->count("--seed")) o.seed = seed;
  }
  if (o.jobs == 0) o.jobs = std::max(1U, std::thread::hardware_concurrency());

  try {
    if (*gen) return cmd_gen(o);
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o);
    return cmd_check(o);
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return kArgument;
  } catch (const DataFormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
