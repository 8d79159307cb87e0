#pragma once

#include "lidreg/list_decoder.hpp"
#include "lidreg/synth.hpp"
#include "lidreg/types.hpp"

#include <string>
#include <vector>

namespace lidreg {

struct ListError {
  double value = 0.0;  ///< min over the list of ||w - w*||; +inf when the list is empty
  bool empty = false;
};

ListError min_list_error(const std::vector<Triplet>& M, const Vector& w_star);

/// Index of the list element nearest to w_star (lowest index on ties).
std::size_t nearest_in_list(const std::vector<Triplet>& M, const Vector& w_star);

/// Per-trial outcome.
struct Metrics {
  int trial = 0;
  std::uint64_t seed = 0;
  double min_list_error = 0.0;  ///< max over components of the per-component error
  std::size_t list_size = 0;
  std::size_t distinct_list_size = 0;  ///< after merging elements closer than the resolution radius
  std::vector<double> per_component_error;
  double holdout_accuracy = 0.0;
  long wall_time_ms = 0;
  long filter_calls = 0;
  long rejected_clusters = 0;
  bool complete = true;
  std::string error;  ///< non-empty when the trial failed outright
};

struct Aggregate {
  std::size_t completed = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double max_error = 0.0;
  double mean_list_size = 0.0;
  double median_list_size = 0.0;
  std::size_t max_list_size = 0;
  double mean_holdout_accuracy = 0.0;
  double mean_filter_calls = 0.0;
};

struct ExperimentOptions {
  int trials = 1;
  int holdout_per_component = 5;
  unsigned jobs = 1;    ///< worker threads; results never depend on it
  bool timing = false;  ///< record wall-clock time (makes output non-reproducible)
};

struct ExperimentSummary {
  GeneratorSpec spec;
  AlgoConfig cfg;
  std::vector<Metrics> per_trial;
  Aggregate aggregate;
};

/// Seeds for trial t: generator seed and algorithm seed derived from the base seeds.
GeneratorSpec trial_spec(const GeneratorSpec& spec, int trial);
AlgoConfig trial_config(const AlgoConfig& cfg, int trial);

/// Generates, decodes and scores one trial. Holdout batches come from streams
/// disjoint from the training data.
Metrics evaluate_trial(const GeneratorSpec& spec, const AlgoConfig& cfg, int trial, const ExperimentOptions& opts);

/// Runs `trials` trials (in parallel when opts.jobs > 1) ordered by trial index.
ExperimentSummary run_experiment(const GeneratorSpec& spec, const AlgoConfig& cfg, const ExperimentOptions& opts);

Aggregate aggregate_metrics(const std::vector<Metrics>& rows);

std::string summary_to_json(const ExperimentSummary& s, bool timing = false);
std::string summary_to_csv(const ExperimentSummary& s, bool timing = false);

/// JSON for a single run on user data: the list of (kappa, w, weight) triplets
/// plus run statistics.
std::string run_result_to_json(const RunResult& r, const AlgoConfig& cfg);
std::string run_result_to_csv(const RunResult& r);

}  // namespace lidreg
