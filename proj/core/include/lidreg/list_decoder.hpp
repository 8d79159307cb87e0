#pragma once

#include "lidreg/types.hpp"

#include <string>
#include <vector>

namespace lidreg {

/// theta1 = (c2/n) (sigma^2 + (8 sqrt(C) theta0 / 7 + sigma / 7)^2)
double theta1(double theta0, const AlgoConfig& cfg, std::size_t n);
/// theta2 = (c4/n) (sigma^2 + 16 C^2 (E_beta[v] + sigma)^2)
double theta2(double mean_v, const AlgoConfig& cfg, std::size_t n);

/// 16 * ceil(m / alpha^2)
long default_max_filter_calls(std::size_t m, double alpha);

enum class ClusterAction {
  accepted,      ///< appended to the output list
  type1_filter,  ///< multifilter on mean absolute residuals
  type2_filter,  ///< multifilter on projected clipped gradients
  rejected,      ///< a subroutine failed; branch dropped
};

const char* to_string(ClusterAction a);

/// What happened to one cluster popped from the worklist.
struct IterationRecord {
  double cluster_weight = 0.0;
  std::size_t support = 0;
  ClusterAction action = ClusterAction::accepted;
  double kappa = 0.0;
  int clip_iterations = 0;
  bool solver_converged = true;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double var_residual = 0.0;    ///< Var_beta(v^b)
  double var_projected = 0.0;   ///< Var_beta(v~^b)
  double threshold1 = 0.0;      ///< c3 log^2(2/alpha) theta1
  double threshold2 = 0.0;      ///< c3 log^2(2/alpha) theta2
  bool split = false;           ///< multifilter took the two-way branch
  std::vector<double> child_weights;  ///< totals of every multifilter output
  int children_queued = 0;
  std::string error;
};

struct RunResult {
  std::vector<Triplet> M;
  long filter_calls = 0;
  long rejected_clusters = 0;
  long pruned_children = 0;     ///< multifilter outputs below alpha |B| / 2
  long nonconverged_solves = 0; ///< clusters whose stationary solve hit its budget
  bool complete = true;         ///< false if max_filter_calls stopped the run
  std::vector<IterationRecord> diagnostics;
};

/// List-decodable regression over the batch collection.
///
/// Keeps a LIFO worklist of soft clusters, starting from unit weights. For
/// each cluster it finds (kappa, w), the top direction u of the clipped
/// gradient covariance, residual scores v^b and projected scores
/// v~^b = grad f^b(w, kappa) . u, then either filters on v (Type-1), on v~
/// (Type-2), or accepts the triplet. Filter outputs are queued only when
/// their total weight is at least alpha |B| / 2. A cluster whose subroutine
/// throws is rejected and recorded; the run itself never throws on data.
RunResult run(const BatchCollection& coll, const AlgoConfig& cfg);

/// Index of the triplet with the smallest mean squared residual on
/// `holdout`; ties go to the lowest index. Throws ArgumentError on empty M.
std::size_t select_by_holdout(const std::vector<Triplet>& M, const Batch& holdout);

/// Drops list elements whose w lies within `radius` of a heavier kept
/// element (ties: earlier index wins). Order of survivors is preserved.
std::vector<Triplet> merge_nearby(const std::vector<Triplet>& M, double radius);

/// sigma log(2/alpha) / sqrt(n alpha): the error scale of a single recovered
/// component, below which two list elements are statistically the same.
double resolution_radius(const AlgoConfig& cfg, std::size_t n);

}  // namespace lidreg
