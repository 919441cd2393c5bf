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

#include "fairdnf/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "fairdnf/errors.hpp"

namespace fairdnf::mip {

void IntegerProgram::mark_integer(int var, int prio) {
  if (var < 0) throw ContractViolation("mark_integer: negative index");
  const auto v = static_cast<std::size_t>(var);
  if (integer.size() <= v) {
    integer.resize(v + 1, false);
    priority.resize(v + 1, 0);
  }
  integer[v] = true;
  priority[v] = prio;
}

void IntegerProgram::validate() const {
  lp.validate();
  if (integer.size() > lp.num_variables())
    throw ContractViolation("integer marks reference undeclared variables");
}

std::string_view to_string(MIPStatus s) {
  switch (s) {
    case MIPStatus::optimal: return "optimal";
    case MIPStatus::feasible_timeout: return "feasible_timeout";
    case MIPStatus::infeasible: return "infeasible";
    case MIPStatus::timeout_no_incumbent: return "timeout_no_incumbent";
  }
  return "?";
}

double MIPResult::gap() const {
  if (!has_incumbent()) return lp::kInf;
  return std::max(0.0, objective - bound) / std::max(1.0, std::abs(objective));
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  std::int64_t id = 0;
  int depth = 0;
  double bound = -lp::kInf;
  std::vector<double> lower, upper;  // bounds of the integer variables
  std::shared_ptr<const lp::Basis> basis;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class Search {
 public:
  Search(const IntegerProgram& prob, const MIPOptions& opt)
      : prob_(prob), opt_(opt), work_(prob.lp) {
    int_pos_.assign(prob.lp.num_variables(), -1);
    lo_.resize(prob.lp.num_variables());
    hi_.resize(prob.lp.num_variables());
    for (std::size_t j = 0; j < prob.lp.num_variables(); ++j) {
      lo_[j] = prob.lp.variable(j).lower;
      hi_[j] = prob.lp.variable(j).upper;
      if (!prob.is_integer(j)) continue;
      int_pos_[j] = static_cast<int>(ints_.size());
      ints_.push_back(static_cast<int>(j));
    }
    integral_objective_ = std::floor(prob.lp.objective_offset()) == prob.lp.objective_offset();
    for (std::size_t j = 0; j < prob.lp.num_variables(); ++j) {
      const double c = prob.lp.variable(j).cost;
      if (prob.is_integer(j) ? std::floor(c) != c : c != 0.0) integral_objective_ = false;
    }
  }

  MIPResult run() {
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(
                    std::chrono::duration<double>(opt_.time_limit));
    lp::SimplexOptions lpo = opt_.lp_options;
    lpo.deadline = deadline;
    lpo.keep_factor = true;

    std::priority_queue<Node, std::vector<Node>, WorseNode> open;
    std::optional<Node> current = Node{};
    current->id = next_id_++;
    for (int j : ints_) {
      current->lower.push_back(prob_.lp.variable(j).lower);
      current->upper.push_back(prob_.lp.variable(j).upper);
    }
    bool timed_out = false;
    bool root_infeasible = false;

    for (;;) {
      if (!current) {
        while (!open.empty() && prunable(open.top().bound)) open.pop();
        if (open.empty()) break;
        current = open.top();
        open.pop();
      }
      if (Clock::now() >= deadline ||
          (opt_.node_limit >= 0 && result_.nodes >= opt_.node_limit)) {
        timed_out = true;
        open.push(std::move(*current));
        break;
      }
      if (!propagate(*current)) {
        current.reset();
        continue;
      }
      ++result_.nodes;
      for (std::size_t k = 0; k < ints_.size(); ++k)
        work_.set_bounds(ints_[k], current->lower[k], current->upper[k]);
      lp::LPSolution sol;
      try {
        lpo.warm_start = current->basis.get();
        sol = lp::solve_lp(work_, lpo);
      } catch (const ResourceError&) {
        if (Clock::now() < deadline) throw;
        timed_out = true;
        open.push(std::move(*current));
        break;
      }
      result_.lp_iterations += sol.iterations;
      if (sol.status == lp::LPStatus::unbounded)
        throw SolverError("solve_mip: LP relaxation is unbounded");
      if (sol.status == lp::LPStatus::infeasible) {
        if (result_.nodes == 1) root_infeasible = true;
        current.reset();
        continue;
      }
      const double bound = sol.objective;
      if (prunable(bound)) {
        current.reset();
        continue;
      }
      if (opt_.heuristic) {
        if (auto cand = opt_.heuristic(sol.primal)) offer(std::move(*cand));
      }
      if (prunable(bound)) {
        current.reset();
        continue;
      }
      if (!opt_.collect_all) fix_by_reduced_cost(*current, sol, bound);

      int branch = -1;
      double best_frac = 0;
      int best_prio = 0;
      for (std::size_t k = 0; k < ints_.size(); ++k) {
        const int j = ints_[k];
        const double v = sol.primal[j];
        const double f = std::min(v - std::floor(v), std::ceil(v) - v);
        if (f <= opt_.int_tol) continue;
        const int prio = static_cast<std::size_t>(j) < prob_.priority.size() ? prob_.priority[j] : 0;
        if (branch < 0 || prio > best_prio ||
            (prio == best_prio && f > best_frac + 1e-12)) {
          branch = static_cast<int>(k);
          best_frac = f;
          best_prio = prio;
        }
      }
      if (branch < 0) {
        offer(sol.primal);
        current.reset();
        continue;
      }

      const double v = sol.primal[ints_[branch]];
      // Only the plunge child keeps the dense factor; queued nodes refactor.
      auto warm = std::make_shared<const lp::Basis>(std::move(sol.basis));
      auto bare = std::make_shared<lp::Basis>(*warm);
      bare->factor.reset();
      Node down = *current;
      down.id = next_id_++;
      down.depth = current->depth + 1;
      down.bound = bound;
      down.upper[branch] = std::floor(v);
      Node up = down;
      up.id = next_id_++;
      up.upper[branch] = current->upper[branch];
      up.lower[branch] = std::ceil(v);
      // Plunge toward the nearer integer; the sibling waits in the queue.
      const bool go_up = v - std::floor(v) >= 0.5;
      Node& next = go_up ? up : down;
      Node& wait = go_up ? down : up;
      next.basis = warm;
      wait.basis = std::move(bare);
      open.push(std::move(wait));
      current = std::move(next);
    }

    result_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (timed_out) {
      double b = result_.has_incumbent() ? result_.objective : lp::kInf;
      while (!open.empty()) {
        b = std::min(b, open.top().bound);
        open.pop();
      }
      result_.bound = b;
      result_.status =
          result_.has_incumbent() ? MIPStatus::feasible_timeout : MIPStatus::timeout_no_incumbent;
    } else if (result_.has_incumbent()) {
      result_.status = MIPStatus::optimal;
      result_.bound = result_.objective;
    } else {
      result_.status = MIPStatus::infeasible;
      result_.bound = root_infeasible ? lp::kInf : std::min(opt_.cutoff, lp::kInf);
    }
    return std::move(result_);
  }

 private:
  bool prunable(double bound) const {
    const double limit = std::min(opt_.cutoff, result_.objective);
    if (!std::isfinite(limit)) return false;
    if (integral_objective_ && result_.has_incumbent() && limit == result_.objective)
      return std::ceil(bound - 1e-6) >= limit - 0.5;
    return bound >= limit - opt_.tol;
  }

  // Row-activity bound tightening on the integer variables. Returns false
  // when some row cannot be satisfied within the node's bounds.
  bool propagate(Node& node) {
    for (std::size_t k = 0; k < ints_.size(); ++k) {
      lo_[ints_[k]] = node.lower[k];
      hi_[ints_[k]] = node.upper[k];
    }
    constexpr double kEps = 1e-6;
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < prob_.lp.num_rows(); ++i) {
        const auto& row = prob_.lp.row(i);
        double min_act = 0, max_act = 0;
        int min_inf = 0, max_inf = 0;
        auto add = [](double a, double v, double& act, int& inf) {
          if (std::isinf(v))
            ++inf;
          else
            act += a * v;
        };
        for (const auto& t : row.terms) {
          const double a = t.coef;
          if (a == 0.0) continue;
          add(a, a > 0 ? lo_[t.var] : hi_[t.var], min_act, min_inf);
          add(a, a > 0 ? hi_[t.var] : lo_[t.var], max_act, max_inf);
        }
        const bool upper_side = row.rel != lp::Relation::ge;
        const bool lower_side = row.rel != lp::Relation::le;
        if (upper_side && min_inf == 0 && min_act > row.rhs + 1e-6) return false;
        if (lower_side && max_inf == 0 && max_act < row.rhs - 1e-6) return false;
        for (const auto& t : row.terms) {
          const int k = int_pos_[t.var];
          if (k < 0 || t.coef == 0.0) continue;
          const double a = t.coef, l = lo_[t.var], h = hi_[t.var];
          double nl = l, nh = h;
          if (upper_side) {
            // a x <= rhs - (min activity of the other terms)
            const double own = a > 0 ? a * l : a * h;
            const bool own_inf = a > 0 ? std::isinf(l) : std::isinf(h);
            if (min_inf == 0 || (min_inf == 1 && own_inf)) {
              const double rest = min_inf == 0 ? min_act - own : min_act;
              const double r = (row.rhs - rest) / a;
              if (a > 0)
                nh = std::min(nh, std::floor(r + kEps));
              else
                nl = std::max(nl, std::ceil(r - kEps));
            }
          }
          if (lower_side) {
            const double own = a > 0 ? a * h : a * l;
            const bool own_inf = a > 0 ? std::isinf(h) : std::isinf(l);
            if (max_inf == 0 || (max_inf == 1 && own_inf)) {
              const double rest = max_inf == 0 ? max_act - own : max_act;
              const double r = (row.rhs - rest) / a;
              if (a > 0)
                nl = std::max(nl, std::ceil(r - kEps));
              else
                nh = std::min(nh, std::floor(r + kEps));
            }
          }
          if (nl > nh) return false;
          if (nl > l || nh < h) {
            // The row's activities stay as computed: they only get looser
            // than the tightened bounds, so later deductions remain valid.
            lo_[t.var] = nl;
            hi_[t.var] = nh;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    for (std::size_t k = 0; k < ints_.size(); ++k) {
      node.lower[k] = lo_[ints_[k]];
      node.upper[k] = hi_[ints_[k]];
    }
    return true;
  }

  // Moving a nonbasic integer one unit off its bound raises the node bound by
  // at least its reduced cost; when that alone reaches the incumbent the
  // variable is pinned for the whole subtree.
  void fix_by_reduced_cost(Node& node, const lp::LPSolution& sol, double bound) {
    if (!result_.has_incumbent() || sol.reduced_costs.empty()) return;
    for (std::size_t k = 0; k < ints_.size(); ++k) {
      const int j = ints_[k];
      if (node.lower[k] == node.upper[k]) continue;
      const double d = sol.reduced_costs[j];
      if (d > 0 && sol.primal[j] <= node.lower[k] + opt_.int_tol && prunable(bound + d)) {
        node.upper[k] = node.lower[k];
        ++result_.fixed;
      } else if (d < 0 && sol.primal[j] >= node.upper[k] - opt_.int_tol && prunable(bound - d)) {
        node.lower[k] = node.upper[k];
        ++result_.fixed;
      }
    }
  }

  // Accepts an integer point if it is feasible for the original problem.
  void offer(std::vector<double> x) {
    for (std::size_t k = 0; k < ints_.size(); ++k) {
      const int j = ints_[k];
      const double r = std::round(x[j]);
      if (std::abs(r - x[j]) > opt_.int_tol) return;
      x[j] = r;
    }
    if (prob_.lp.max_violation(x) > 1e-6) return;
    const double obj = prob_.lp.objective(x);
    if (opt_.collect_all && result_.all_solutions.size() < opt_.max_collected) {
      std::vector<long long> key;
      key.reserve(ints_.size());
      for (int j : ints_) key.push_back(std::llround(x[j]));
      if (seen_.insert(std::move(key)).second) result_.all_solutions.push_back({x, obj});
    }
    if (!result_.has_incumbent() || obj < result_.objective - opt_.tol) {
      result_.x = x;
      result_.objective = obj;
      result_.pool.push_back({std::move(x), obj});
    }
  }

  const IntegerProgram& prob_;
  const MIPOptions& opt_;
  lp::LinearProgram work_;
  std::vector<int> ints_;
  std::vector<int> int_pos_;        // variable -> index in ints_, or -1
  std::vector<double> lo_, hi_;     // propagation scratch bounds
  bool integral_objective_ = true;
  std::int64_t next_id_ = 0;
  MIPResult result_;
  std::set<std::vector<long long>> seen_;
};

}  // namespace

MIPResult solve_mip(const IntegerProgram& prob, const MIPOptions& options) {
  if (!(options.time_limit > 0)) throw ContractViolation("solve_mip: time_limit must be positive");
  if (!(options.tol > 0)) throw ContractViolation("solve_mip: tol must be positive");
  prob.validate();
  Search search(prob, options);
  return search.run();
}

}  // namespace fairdnf::mip
