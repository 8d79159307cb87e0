#include "lidreg/eval.hpp"

#include "lidreg/errors.hpp"
#include "lidreg/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace lidreg {
namespace {

using json = nlohmann::ordered_json;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json cfg_json(const AlgoConfig& c) {
  return json{{"alpha", c.alpha},
              {"sigma", c.sigma},
              {"C", c.C},
              {"C_p", c.C_p},
              {"p", c.p},
              {"c2", c.c2},
              {"c3", c.c3},
              {"c4", c.c4},
              {"stationary_tol_scale", c.stationary_tol_scale},
              {"power_iter_tol", c.power_iter_tol},
              {"power_iter_max", c.power_iter_max},
              {"max_filter_calls", c.max_filter_calls},
              {"rng_seed", c.rng_seed}};
}

json spec_json(const GeneratorSpec& s) {
  json w = json::array();
  for (const auto& v : s.w_stars) w.push_back(vec_json(v));
  json out{{"d", s.d},
           {"n", s.n},
           {"m", s.m},
           {"alpha", s.alpha},
           {"w_stars", w},
           {"covariate_model", to_string(s.covariates)},
           {"condition_number", s.condition_number},
           {"C1", s.C1},
           {"noise_model", to_string(s.noise)},
           {"sigma", s.sigma},
           {"dof", s.dof},
           {"adversary", to_string(s.adversary)},
           {"seed", s.seed}};
  if (s.adv_w.size()) out["adv_w"] = vec_json(s.adv_w);
  if (s.adversary == Adversary::mirror) out["adv_scale"] = s.adv_scale;
  if (s.adv_x0.size()) out["adv_x0"] = vec_json(s.adv_x0);
  if (s.adversary == Adversary::point_mass) out["adv_y0"] = s.adv_y0;
  if (s.adv_target.size()) out["adv_target"] = vec_json(s.adv_target);
  return out;
}

json metrics_json(const Metrics& m, bool timing) {
  json out{{"trial", m.trial},
           {"seed", m.seed},
           {"min_list_error", m.min_list_error},
           {"list_size", m.list_size},
           {"distinct_list_size", m.distinct_list_size},
           {"per_component_error", m.per_component_error},
           {"holdout_accuracy", m.holdout_accuracy},
           {"filter_calls", m.filter_calls},
           {"rejected_clusters", m.rejected_clusters},
           {"complete", m.complete}};
  if (timing) out["wall_time_ms"] = m.wall_time_ms;
  if (!m.error.empty()) out["error"] = m.error;
  return out;
}

}  // namespace

ListError min_list_error(const std::vector<Triplet>& M, const Vector& w_star) {
  if (M.empty()) return {std::numeric_limits<double>::infinity(), true};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : M) {
    if (t.w.size() != w_star.size()) throw ArgumentError("dimension mismatch between list element and w*");
    best = std::min(best, (t.w - w_star).norm());
  }
  return {best, false};
}

std::size_t nearest_in_list(const std::vector<Triplet>& M, const Vector& w_star) {
  if (M.empty()) throw ArgumentError("candidate list is empty");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < M.size(); ++k) {
    const double d = (M[k].w - w_star).norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

GeneratorSpec trial_spec(const GeneratorSpec& spec, int trial) {
  GeneratorSpec s = spec;
  s.seed = spec.seed + static_cast<std::uint64_t>(trial);
  return s;
}

AlgoConfig trial_config(const AlgoConfig& cfg, int trial) {
  AlgoConfig c = cfg;
  c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(trial);
  return c;
}

Metrics evaluate_trial(const GeneratorSpec& spec, const AlgoConfig& cfg, int trial, const ExperimentOptions& opts) {
  Metrics row;
  row.trial = trial;
  const GeneratorSpec ts = trial_spec(spec, trial);
  const AlgoConfig tc = trial_config(cfg, trial);
  row.seed = ts.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const LabeledCollection data = generate(ts);
    const RunResult r = run(data.coll, tc);
    row.list_size = r.M.size();
    row.filter_calls = r.filter_calls;
    row.rejected_clusters = r.rejected_clusters;
    row.complete = r.complete;
    row.min_list_error = 0.0;
    for (const auto& w : data.w_stars) {
      const double e = min_list_error(r.M, w).value;
      row.per_component_error.push_back(e);
      row.min_list_error = std::max(row.min_list_error, e);
    }
    const std::vector<Triplet> merged = merge_nearby(r.M, resolution_radius(tc, ts.n));
    row.distinct_list_size = merged.size();
    int hits = 0, total = 0;
    for (std::size_t j = 0; j < data.w_stars.size(); ++j) {
      for (int h = 0; h < opts.holdout_per_component; ++h) {
        ++total;
        if (merged.empty()) continue;
        const Batch hold = generate_holdout_batch(ts, j, static_cast<std::uint64_t>(h));
        hits += select_by_holdout(merged, hold) == nearest_in_list(merged, data.w_stars[j]) ? 1 : 0;
      }
    }
    row.holdout_accuracy = total ? static_cast<double>(hits) / total : 0.0;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.complete = false;
    row.min_list_error = std::numeric_limits<double>::infinity();
  }
  row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return row;
}

Aggregate aggregate_metrics(const std::vector<Metrics>& rows) {
  Aggregate a;
  std::vector<double> errors, sizes;
  double holdout = 0.0, calls = 0.0;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    ++a.completed;
    errors.push_back(r.min_list_error);
    sizes.push_back(static_cast<double>(r.list_size));
    a.max_error = std::max(a.max_error, r.min_list_error);
    a.max_list_size = std::max(a.max_list_size, r.list_size);
    holdout += r.holdout_accuracy;
    calls += static_cast<double>(r.filter_calls);
  }
  if (a.completed == 0) return a;
  const double k = static_cast<double>(a.completed);
  for (double e : errors) a.mean_error += e / k;
  for (double s : sizes) a.mean_list_size += s / k;
  a.median_error = median(errors);
  a.median_list_size = median(sizes);
  a.mean_holdout_accuracy = holdout / k;
  a.mean_filter_calls = calls / k;
  return a;
}

ExperimentSummary run_experiment(const GeneratorSpec& spec, const AlgoConfig& cfg, const ExperimentOptions& opts) {
  if (opts.trials < 1) throw ArgumentError("trials must be >= 1");
  spec.validate();
  cfg.validate();
  ExperimentSummary s{spec, cfg, std::vector<Metrics>(static_cast<std::size_t>(opts.trials)), {}};

  const unsigned workers = std::clamp(opts.jobs, 1U, static_cast<unsigned>(opts.trials));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < opts.trials; t = next++) s.per_trial[static_cast<std::size_t>(t)] = evaluate_trial(spec, cfg, t, opts);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  s.aggregate = aggregate_metrics(s.per_trial);
  return s;
}

std::string summary_to_json(const ExperimentSummary& s, bool timing) {
  json rows = json::array();
  for (const auto& m : s.per_trial) rows.push_back(metrics_json(m, timing));
  const Aggregate& a = s.aggregate;
  json out{{"config", {{"algorithm", cfg_json(s.cfg)}, {"generator", spec_json(s.spec)}}},
           {"per_trial", rows},
           {"aggregate",
            {{"completed", a.completed},
             {"mean_error", a.mean_error},
             {"median_error", a.median_error},
             {"max_error", a.max_error},
             {"mean_list_size", a.mean_list_size},
             {"median_list_size", a.median_list_size},
             {"max_list_size", a.max_list_size},
             {"mean_holdout_accuracy", a.mean_holdout_accuracy},
             {"mean_filter_calls", a.mean_filter_calls}}}};
  return out.dump(2) + "\n";
}

std::string summary_to_csv(const ExperimentSummary& s, bool timing) {
  std::ostringstream out;
  std::size_t k = s.spec.w_stars.size();
  out << "trial,seed,min_list_error,list_size,distinct_list_size,holdout_accuracy,filter_calls,rejected_clusters,complete";
  for (std::size_t j = 0; j < k; ++j) out << ",error_" << j;
  if (timing) out << ",wall_time_ms";
  out << '\n';
  for (const auto& m : s.per_trial) {
    out << m.trial << ',' << m.seed << ',' << format_double(m.min_list_error) << ',' << m.list_size << ','
        << m.distinct_list_size << ',' << format_double(m.holdout_accuracy) << ',' << m.filter_calls << ',' << m.rejected_clusters << ','
        << (m.complete ? 1 : 0);
    for (std::size_t j = 0; j < k; ++j) {
      out << ',' << (j < m.per_component_error.size() ? format_double(m.per_component_error[j]) : "nan");
    }
    if (timing) out << ',' << m.wall_time_ms;
    out << '\n';
  }
  return out.str();
}

std::string run_result_to_json(const RunResult& r, const AlgoConfig& cfg) {
  json list = json::array();
  for (const auto& t : r.M) {
    list.push_back({{"kappa", t.kappa},
                    {"w", vec_json(t.w)},
                    {"total_weight", t.beta.total()},
                    {"support", t.beta.support_size()}});
  }
  json diag = json::array();
  for (const auto& d : r.diagnostics) {
    json rec{{"action", to_string(d.action)},
             {"cluster_weight", d.cluster_weight},
             {"support", d.support},
             {"kappa", d.kappa},
             {"clip_iterations", d.clip_iterations},
             {"solver_converged", d.solver_converged},
             {"theta0", d.theta0},
             {"theta1", d.theta1},
             {"theta2", d.theta2},
             {"var_residual", d.var_residual},
             {"var_projected", d.var_projected},
             {"threshold1", d.threshold1},
             {"threshold2", d.threshold2},
             {"split", d.split},
             {"child_weights", d.child_weights},
             {"children_queued", d.children_queued}};
    if (!d.error.empty()) rec["error"] = d.error;
    diag.push_back(std::move(rec));
  }
  json out{{"config", cfg_json(cfg)},
           {"result",
            {{"list_size", r.M.size()},
             {"filter_calls", r.filter_calls},
             {"rejected_clusters", r.rejected_clusters},
             {"pruned_children", r.pruned_children},
             {"nonconverged_solves", r.nonconverged_solves},
             {"complete", r.complete},
             {"list", list}}},
           {"diagnostics", diag}};
  return out.dump(2) + "\n";
}

std::string run_result_to_csv(const RunResult& r) {
  std::ostringstream out;
  const std::size_t d = r.M.empty() ? 0 : static_cast<std::size_t>(r.M.front().w.size());
  out << "index,kappa,total_weight";
  for (std::size_t j = 0; j < d; ++j) out << ",w_" << j;
  out << '\n';
  for (std::size_t k = 0; k < r.M.size(); ++k) {
    out << k << ',' << format_double(r.M[k].kappa) << ',' << format_double(r.M[k].beta.total());
    for (Eigen::Index j = 0; j < r.M[k].w.size(); ++j) out << ',' << format_double(r.M[k].w(j));
    out << '\n';
  }
  return out.str();
}

}  // namespace lidreg
