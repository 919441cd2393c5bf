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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairdnf/bitset.hpp"
#include "fairdnf/bnb.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/lp.hpp"

namespace fairdnf {

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// A conjunction of binary features, kept sorted and duplicate-free.
struct Clause {
  std::vector<int> literals;

  Clause() = default;
  /// Sorts and deduplicates; throws ContractViolation when empty or negative.
  explicit Clause(std::vector<int> lits);

  int complexity() const { return 1 + static_cast<int>(literals.size()); }
  auto operator<=>(const Clause&) const = default;
  bool operator==(const Clause&) const = default;
};

struct RuleSet {
  std::vector<Clause> clauses;
  std::vector<int> multiplicity;

  void add(Clause c, int mult = 1);
  bool empty() const { return clauses.empty(); }
  int total_complexity() const;
  /// Clause order does not matter for prediction.
  bool operator==(const RuleSet&) const = default;
};

/// Rows satisfying every literal of the clause.
Bitset coverage(const Clause& clause, const BinaryDataset& ds);
/// Rows satisfying at least one clause (the rows predicted +1).
Bitset coverage(const RuleSet& rs, const BinaryDataset& ds);

/// e.g. "(priors_count > 2) and (age_below_25 == True) OR (...)".
std::string to_dnf(const RuleSet& rs, const BinFeatureMap& map);
std::string to_string(const Clause& c, const BinFeatureMap& map);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class FairnessMetric { none, equal_opportunity, equalized_odds };
std::string_view to_string(FairnessMetric m);
FairnessMetric fairness_metric_from_string(std::string_view s);

struct FairnessSpec {
  FairnessMetric metric = FairnessMetric::none;
  double epsilon1 = 1.0;
  std::optional<double> epsilon2;  // defaults to epsilon1

  double eps2() const { return epsilon2.value_or(epsilon1); }
  bool active() const { return metric != FairnessMetric::none; }
  void validate() const;
};

enum class MasterObjective { hamming, zero_one };
std::string_view to_string(MasterObjective o);
MasterObjective master_objective_from_string(std::string_view s);

struct MasterConfig {
  double C = 10.0;
  MasterObjective objective = MasterObjective::hamming;
  FairnessSpec fairness;
  /// Test-only: caps w at 1 in the LP relaxation as well.
  bool unit_upper_bound = false;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Master model
// ---------------------------------------------------------------------------

/// Which rate a fairness row bounds: false negatives (positive rows) or the
/// normalized Hamming proxy of false positives (negative rows).
enum class RateKind { fnr, fpr };

struct FairnessRow {
  int row = -1;
  int g = 0;  // rate(g) - rate(h) <= eps
  int h = 0;
  RateKind kind = RateKind::fnr;
};

class MasterModel {
 public:
  MasterObjective objective = MasterObjective::hamming;
  MasterConfig config;
  lp::LinearProgram lp;  // relaxation: w in [0, inf)

  std::vector<Clause> pool;
  std::vector<Bitset> cover;  // per pooled clause
  std::vector<int> w_var;     // per pooled clause
  std::vector<int> zeta_var;  // per data row, -1 if absent
  std::vector<int> cover_row, exact_row, negative_row;  // per data row, -1 if absent
  int complexity_row = -1;
  std::vector<FairnessRow> fairness_rows;

  /// Appends a column; returns its pool index. Duplicates are not checked.
  int add_clause(const Clause& clause, const BinaryDataset& ds);

  /// The integer program: w integer in [0, floor(C / c_k)] (0-1 variant:
  /// binary), zeta binary. Branches on w first.
  mip::IntegerProgram integer_program() const;

  const BinaryDataset& dataset() const { return *ds_; }

 private:
  friend MasterModel build_master(const std::vector<Clause>&, const BinaryDataset&,
                                  const MasterConfig&, bool);
  const BinaryDataset* ds_ = nullptr;
};

/// Shared builder. `allow_empty_pool` supports cold-started column generation.
/// The dataset must outlive the model.
MasterModel build_master(const std::vector<Clause>& pool, const BinaryDataset& ds,
                         const MasterConfig& cfg, bool allow_empty_pool = false);
MasterModel build_master_hamming(const std::vector<Clause>& pool, const BinaryDataset& ds,
                                 MasterConfig cfg);
MasterModel build_master_zero_one(const std::vector<Clause>& pool, const BinaryDataset& ds,
                                  MasterConfig cfg);

/// Rounds w in an LP point and fills zeta so the point is integral; used as
/// the branch-and-bound completion heuristic.
std::vector<double> complete_from_relaxation(const MasterModel& model,
                                             const std::vector<double>& x);

/// One RuleSet per pool incumbent, in discovery order.
std::vector<RuleSet> decode(const MasterModel& model, const mip::MIPResult& mip);
RuleSet decode_point(const MasterModel& model, const std::vector<double>& x);

/// Weighted count of misclassified rows.
double zero_one_errors(const RuleSet& rs, const BinaryDataset& ds);
/// Weighted Hamming loss: uncovered positives plus covering clauses
/// (with multiplicity) per negative.
double hamming_loss(const RuleSet& rs, const BinaryDataset& ds);

/// Lowest training 0-1 error; ties by lower complexity, then list order.
RuleSet select_best_01(const std::vector<RuleSet>& rulesets, const BinaryDataset& ds);

}  // namespace fairdnf
