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
#include <vector>

#include "fairdnf/bnb.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/lp.hpp"
#include "fairdnf/master.hpp"

namespace fairdnf {

/// Restricted master duals in the sign convention the pricing objective uses:
/// every field is nonnegative for an optimal dual solution.
struct DualSolution {
  struct Gamma {
    int g = 0;
    int h = 0;
    RateKind kind = RateKind::fnr;
    double value = 0.0;
  };

  FairnessMetric metric = FairnessMetric::none;
  std::vector<double> mu;             // coverage rows, per data row (0 off P)
  std::vector<double> alpha;          // exactness rows, per data row (0 off P)
  std::vector<double> negative_cost;  // cost of covering each negative row
  double lambda = 0.0;                // complexity row
  std::vector<Gamma> gamma;           // fairness rows

  /// Reads the duals of a solved relaxation of `model`.
  static DualSolution from_lp(const MasterModel& model, const lp::LPSolution& sol);
  /// Zero duals with the Hamming negative costs of `ds`.
  static DualSolution zero(const BinaryDataset& ds, FairnessMetric metric);

  /// Per-row contribution to the reduced cost of a clause covering the row.
  std::vector<double> row_coefficients(const BinaryDataset& ds) const;
  /// Same duals restricted to `rows` (indices into the original data).
  DualSolution restrict_rows(std::span<const std::size_t> rows) const;
};

struct PricingConfig {
  int D = 9;                  // literal cap per clause
  double time_limit = 45.0;   // seconds, exact solve
  std::size_t max_columns = 100;
  std::size_t max_rows = 2000;
  std::size_t max_nonzeros = 100000;
  double tol = lp::kDefaultTol;
  int greedy_restarts = 8;
  std::uint64_t seed = 0;

  /// Default D = C - 1.
  static PricingConfig for_complexity(double C);
  void validate() const;
};

struct PricedColumn {
  Clause clause;
  double reduced_cost = 0.0;
};

/// Reduced cost of a clause's column in the restricted master LP.
double reduced_cost(const Clause& clause, const BinaryDataset& ds, const DualSolution& duals,
                    const FairnessSpec& fairness);

struct PricingModel {
  mip::IntegerProgram ip;
  std::vector<int> z_var;       // per feature of the priced dataset, -1 if collapsed
  std::vector<int> delta_var;   // per row, -1 if the row was dropped
  std::vector<double> coef;     // per row objective coefficient of delta
  std::vector<int> representative;  // per feature: kept feature with the same column

  Clause decode(const std::vector<double>& x) const;
  /// Integral point with delta set from the coverage of the rounded z.
  std::vector<double> complete(const std::vector<double>& x, const BinaryDataset& ds) const;
};

PricingModel build_pricing(const BinaryDataset& ds, const DualSolution& duals,
                           const FairnessSpec& fairness, const PricingConfig& cfg);

/// How an exact pricing call ended. An empty result certifies optimality of
/// the restricted master only when `certified()` holds.
struct PricingStats {
  bool subsampled = false;
  mip::MIPStatus status = mip::MIPStatus::optimal;
  std::int64_t nodes = 0;
  double seconds = 0.0;

  bool certified() const {
    return !subsampled && (status == mip::MIPStatus::optimal || status == mip::MIPStatus::infeasible);
  }
};

/// Exact pricing through branch-and-bound. Returns up to max_columns clauses
/// with reduced cost below -tol on the full data, ascending, ties broken by
/// literal order. `keep_features` are retained when subsampling features.
std::vector<PricedColumn> solve_pricing_exact(const BinaryDataset& ds, const DualSolution& duals,
                                              const FairnessSpec& fairness,
                                              const PricingConfig& cfg,
                                              const std::vector<int>& keep_features = {},
                                              PricingStats* stats = nullptr);

/// Greedy literal-by-literal descent with randomized restarts.
std::vector<PricedColumn> solve_pricing_greedy(const BinaryDataset& ds, const DualSolution& duals,
                                               const FairnessSpec& fairness,
                                               const PricingConfig& cfg);

struct Subsample {
  BinaryDataset ds;
  std::vector<std::size_t> rows;      // sampled row -> original row
  std::vector<std::size_t> features;  // sampled feature -> original feature
  bool identity = true;

  Clause lift(const Clause& c) const;
};

/// Stratified row sample and feature sample meeting the row and nonzero
/// budgets; returns the data unchanged when both already hold.
Subsample subsample(const BinaryDataset& ds, const PricingConfig& cfg, std::uint64_t seed,
                    const std::vector<int>& keep_features = {});

/// Sorts by reduced cost then literals, drops duplicates, keeps `limit`.
void rank_columns(std::vector<PricedColumn>& cols, std::size_t limit);

}  // namespace fairdnf
