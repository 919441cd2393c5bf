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

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

namespace fairdnf::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultTol = 1e-7;

enum class Relation { le, ge, eq };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  double cost = 0.0;
  double lower = 0.0;
  double upper = kInf;
  std::string name;
};

struct Row {
  std::vector<Term> terms;
  Relation rel = Relation::le;
  double rhs = 0.0;
  std::string name;
};

/// A minimization LP over variables with finite lower bounds. Rows are stored
/// sparsely. No implicit upper bounds are ever added.
class LinearProgram {
 public:
  int add_variable(double cost, double lower = 0.0, double upper = kInf, std::string name = {});
  int add_row(std::vector<Term> terms, Relation rel, double rhs, std::string name = {});
  /// Appends a variable together with its coefficients in existing rows.
  int add_column(double cost, std::span<const std::pair<int, double>> entries,
                 double lower = 0.0, double upper = kInf, std::string name = {});

  void set_bounds(int var, double lower, double upper);
  void set_cost(int var, double cost) { vars_[var].cost = cost; }
  void set_objective_offset(double c) { offset_ = c; }
  double objective_offset() const { return offset_; }

  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const Variable& variable(std::size_t j) const { return vars_[j]; }
  const Row& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  /// Throws ContractViolation on dangling indices or inverted bounds.
  void validate() const;

  /// Row activity a_i . x.
  double activity(std::size_t i, std::span<const double> x) const;
  double objective(std::span<const double> x) const;
  /// Largest bound or row violation of x.
  double max_violation(std::span<const double> x) const;

  /// CPLEX-LP-style text for cross-checking with external tools.
  std::string to_lp_format() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

enum class LPStatus { optimal, infeasible, unbounded };
std::string_view to_string(LPStatus s);

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper };

/// Dense inverse of a basis matrix, opaque outside the solver.
struct Factor;

/// Basis snapshot for warm starts: one status per structural variable and per
/// row (the row's logical/slack variable).
struct Basis {
  std::vector<VarStatus> structural;
  std::vector<VarStatus> logical;
  /// Set when SimplexOptions::keep_factor was on; lets a warm start skip the
  /// initial factorization. Ignored if it does not match the statuses.
  std::shared_ptr<const Factor> factor;
  bool empty() const { return structural.empty() && logical.empty(); }
};

struct SimplexOptions {
  double tol = kDefaultTol;          // reported-solution tolerance
  double feasibility_tol = 1e-9;     // internal primal tolerance
  double optimality_tol = 1e-9;      // internal dual tolerance
  double pivot_tol = 1e-9;
  std::int64_t max_iterations = 1'000'000;
  int refactor_interval = 64;
  int degenerate_limit = 50;         // degenerate pivots before Bland's rule
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const Basis* warm_start = nullptr;
  bool keep_factor = false;
};

/// Duals follow the minimization convention: >= rows have nonnegative duals,
/// <= rows nonpositive. reduced_costs[j] = c_j - y . A_j.
struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  std::int64_t iterations = 0;
  Basis basis;
};

/// Bounded revised simplex. Throws SolverError on a numerically singular
/// basis that cannot be repaired and ResourceError past the iteration cap or
/// deadline.
LPSolution solve_lp(const LinearProgram& prob, const SimplexOptions& options = {});

}  // namespace fairdnf::lp
