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
#include <string_view>
#include <vector>

#include "fairdnf/bnb.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/master.hpp"
#include "fairdnf/mine.hpp"
#include "fairdnf/pricing.hpp"

namespace fairdnf {

struct ColGenConfig {
  double time_limit = 300.0;          // whole column-generation loop, seconds
  double pricing_time_limit = 45.0;   // per exact pricing solve
  double mip_time_limit = 600.0;      // final master IP
  std::size_t max_columns = 100;      // appended per round
  double tol = lp::kDefaultTol;
  std::optional<int> D;               // literal cap; C - 1 when unset
  std::size_t max_rows = 2000;        // pricing subsample budgets
  std::size_t max_nonzeros = 100000;
  int max_iterations = 100000;
  bool greedy = true;                 // cheap pricing before the exact solve
  bool warm_start = true;             // mine trees before the loop (train)
  /// Warm clauses placed in the initial restricted master; any excess is a
  /// column cache priced before the heuristics each round.
  std::size_t warm_pool_limit = 1000;
  MineGrid mine_grid;

  void validate() const;
  PricingConfig pricing(double C, std::uint64_t seed) const;
};

enum class Termination { priced_out, time_limit, cycling, iteration_limit, sample_exhausted };
std::string_view to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;   // restricted master LP
  double best_rho = 0.0;    // 0 when no improving column was found
  std::size_t columns_added = 0;
  double elapsed = 0.0;     // seconds since the loop started
  double lp_seconds = 0.0;
  double pricing_seconds = 0.0;
  std::string source;       // "cache", "greedy", "exact" or "none"
};

struct ColGenTrace {
  std::vector<IterationRecord> records;
  Termination reason = Termination::priced_out;
  std::string diagnostic;
  double seconds = 0.0;         // loop only
  double mining_seconds = 0.0;  // warm start, reported separately

  /// iteration,objective,best_rho,columns_added,elapsed_s,source,lp_s,pricing_s
  std::string to_csv() const;
};

struct ColGenResult {
  std::vector<Clause> pool;  // warm start first, then generated columns
  ColGenTrace trace;
  double objective = 0.0;    // last restricted master LP value
};

/// Restricted master LP, pricing, append; repeated until exact pricing
/// certifies no improving column, the budget runs out, or the same column
/// comes back (cycling). Throws InfeasibleError when the relaxation is
/// infeasible under the fairness rows.
ColGenResult run_colgen(const BinaryDataset& ds, const MasterConfig& cfg,
                        const ColGenConfig& ccfg, const std::vector<Clause>& warm,
                        std::uint64_t seed);

struct TrainResult {
  RuleSet rules;
  std::vector<RuleSet> candidates;  // master IP pool, discovery order
  std::vector<Clause> pool;
  ColGenTrace trace;
  mip::MIPResult mip;
};

/// Solves the master IP over a fixed pool and re-ranks its incumbents by
/// training 0-1 error. Throws ResourceError when no incumbent is found.
TrainResult solve_master_ip(const BinaryDataset& ds, const std::vector<Clause>& pool,
                            const MasterConfig& cfg, const ColGenConfig& ccfg);

/// Mining warm start, column generation, then the master IP. Rows are
/// compressed internally; the returned rules apply to the original rows.
TrainResult train(const BinaryDataset& ds, const BinFeatureMap& map, const MasterConfig& cfg,
                  const ColGenConfig& ccfg, std::uint64_t seed);

}  // namespace fairdnf
