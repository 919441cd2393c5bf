// Copyright 2026 The FairDNF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdnf/colgen.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/master.hpp"

namespace fairdnf {

/// +1 iff some clause is fully satisfied. Throws ContractViolation when a
/// literal is outside the dataset's feature space.
std::vector<int> predict(const RuleSet& rs, const BinaryDataset& ds);

struct GroupRates {
  std::string name;
  double positives = 0.0;  // weighted
  double negatives = 0.0;
  std::optional<double> fnr;  // unset when the group has no positives
  std::optional<double> fpr;  // unset when the group has no negatives
};

/// All counts are weighted by row multiplicity. Rates and gaps are in [0, 1].
struct MetricsReport {
  double rows = 0.0;
  double accuracy = 0.0;
  double errors = 0.0;        // 0-1 loss, summed
  double hamming_loss = 0.0;  // summed; clauses counted with multiplicity
  int complexity = 0;
  std::size_t clauses = 0;
  std::vector<GroupRates> groups;
  double fnr_gap = 0.0;  // max pairwise |FNR_g - FNR_h| over defined groups
  double fpr_gap = 0.0;
  double eq_opp_gap = 0.0;   // = fnr_gap
  double eq_odds_gap = 0.0;  // max(fnr_gap, fpr_gap)

  /// The gap a fairness metric constrains (eq_opp_gap for none).
  double gap(FairnessMetric m) const {
    return m == FairnessMetric::equalized_odds ? eq_odds_gap : eq_opp_gap;
  }
};

MetricsReport evaluate(const RuleSet& rs, const BinaryDataset& ds);

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

struct GridCell {
  MasterConfig master;
  ColGenConfig colgen;
};

struct FoldOutcome {
  int fold = 0;
  bool ok = false;
  std::string error;  // set when !ok (infeasible, no incumbent)
  MetricsReport train;
  MetricsReport test;
  RuleSet rules;
  double seconds = 0.0;
};

struct CellResult {
  GridCell cell;
  std::vector<FoldOutcome> folds;  // sorted by fold

  bool feasible() const;  // every fold succeeded
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
};
Summary summarize(const std::vector<double>& values);

struct FrontierPoint {
  FairnessMetric metric = FairnessMetric::none;
  double epsilon = 1.0;
  double C = 0.0;  // chosen by mean test accuracy
  std::size_t folds = 0;
  Summary test_accuracy, train_accuracy;
  Summary test_gap, train_gap;  // the metric's gap
  double complexity = 0.0;      // mean over folds
  bool dominated = false;       // on test accuracy vs test gap
};

struct CvOptions {
  int jobs = 1;
};

/// Trains every cell on every fold (train on k - 1 folds, evaluate on the
/// held-out one). A failing fold marks its cell infeasible; nothing throws
/// for infeasibility. Output order: grid order, folds ascending.
std::vector<CellResult> cross_validate(const BinaryDataset& ds, const BinFeatureMap& map,
                                       const FoldPlan& folds, const std::vector<GridCell>& grid,
                                       std::uint64_t seed, const CvOptions& opt = {});

/// Per epsilon: the feasible cell with the best mean test accuracy (ties to
/// the smaller C). Sorted by epsilon; dominated points are flagged.
std::vector<FrontierPoint> frontier(const std::vector<CellResult>& cells);

/// Marks points beaten on both test accuracy and test gap.
void flag_dominated(std::vector<FrontierPoint>& points);

/// Phase 1 runs column generation for each (epsilon, C) pair and unions the
/// pools per fold; phase 2 solves the master IP on that pool for every
/// (epsilon, C) pair of the larger grid.
struct FrontierPlan {
  FairnessMetric metric = FairnessMetric::equal_opportunity;
  MasterObjective objective = MasterObjective::hamming;
  std::vector<double> phase1_epsilons = {0.01, 0.1, 1.0};
  std::vector<double> phase1_C = {5, 15, 30};
  std::vector<double> epsilons = {0.0, 0.01, 0.05, 0.1, 0.15, 0.2, 1.0};
  std::vector<double> C = {5, 10, 15, 20, 30};
  ColGenConfig colgen;

  void validate() const;
};

struct FrontierRun {
  std::vector<CellResult> cells;  // phase-2 grid, epsilon-major
  std::vector<FrontierPoint> points;
  std::vector<std::size_t> pool_sizes;  // per fold
};

FrontierRun two_phase_frontier(const BinaryDataset& ds, const BinFeatureMap& map,
                               const FoldPlan& folds, const FrontierPlan& plan,
                               std::uint64_t seed, const CvOptions& opt = {});

}  // namespace fairdnf
