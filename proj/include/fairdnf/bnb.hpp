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
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "fairdnf/lp.hpp"

namespace fairdnf::mip {

/// A LinearProgram plus integrality marks. Branching visits higher priority
/// classes first; within a class the most fractional variable wins.
struct IntegerProgram {
  lp::LinearProgram lp;
  std::vector<bool> integer;
  std::vector<int> priority;

  void mark_integer(int var, int prio = 0);
  bool is_integer(std::size_t var) const { return var < integer.size() && integer[var]; }
  /// Throws ContractViolation if integer marks reference undeclared variables.
  void validate() const;
};

enum class MIPStatus { optimal, feasible_timeout, infeasible, timeout_no_incumbent };
std::string_view to_string(MIPStatus s);

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
};

struct MIPResult {
  MIPStatus status = MIPStatus::infeasible;
  std::vector<double> x;
  double objective = lp::kInf;
  double bound = -lp::kInf;
  /// Every improving incumbent, in discovery order (strictly decreasing).
  std::vector<Solution> pool;
  /// Every distinct integer-feasible point met during search when
  /// MIPOptions::collect_all is set, in discovery order.
  std::vector<Solution> all_solutions;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  /// Variable bounds tightened by reduced-cost fixing, summed over nodes.
  std::int64_t fixed = 0;
  double seconds = 0.0;

  bool has_incumbent() const { return !x.empty(); }
  double gap() const;
};

/// Proposes an integer point from a node's LP solution; returned points are
/// checked for feasibility before use.
using Heuristic = std::function<std::optional<std::vector<double>>(const std::vector<double>&)>;

struct MIPOptions {
  double time_limit = 600.0;  // seconds
  double tol = lp::kDefaultTol;
  double int_tol = 1e-6;
  std::int64_t node_limit = -1;  // negative: unlimited
  /// Nodes whose bound is not below the cutoff are pruned.
  double cutoff = lp::kInf;
  bool collect_all = false;
  std::size_t max_collected = 100000;
  Heuristic heuristic;
  lp::SimplexOptions lp_options;
};

MIPResult solve_mip(const IntegerProgram& prob, const MIPOptions& options = {});

}  // namespace fairdnf::mip
