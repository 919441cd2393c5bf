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

#include "fairdnf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fairdnf/errors.hpp"

namespace fairdnf::lp {

// ---------------------------------------------------------------------------
// LinearProgram
// ---------------------------------------------------------------------------

int LinearProgram::add_variable(double cost, double lower, double upper, std::string name) {
  vars_.push_back({cost, lower, upper, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::add_row(std::vector<Term> terms, Relation rel, double rhs, std::string name) {
  rows_.push_back({std::move(terms), rel, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

int LinearProgram::add_column(double cost, std::span<const std::pair<int, double>> entries,
                              double lower, double upper, std::string name) {
  const int j = add_variable(cost, lower, upper, std::move(name));
  for (const auto& [row, coef] : entries) {
    if (row < 0 || static_cast<std::size_t>(row) >= rows_.size())
      throw ContractViolation(fmt::format("add_column: row {} out of range", row));
    rows_[row].terms.push_back({j, coef});
  }
  return j;
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  vars_.at(var).lower = lower;
  vars_.at(var).upper = upper;
}

void LinearProgram::validate() const {
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    if (!std::isfinite(v.lower))
      throw ContractViolation(fmt::format("variable {} needs a finite lower bound", j));
    if (v.upper < v.lower)
      throw ContractViolation(fmt::format("variable {} has upper < lower", j));
    if (!std::isfinite(v.cost)) throw ContractViolation(fmt::format("variable {} cost", j));
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!std::isfinite(rows_[i].rhs))
      throw ContractViolation(fmt::format("row {} has a non-finite rhs", i));
    for (const auto& t : rows_[i].terms)
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= vars_.size() || !std::isfinite(t.coef))
        throw ContractViolation(fmt::format("row {} references an undeclared variable", i));
  }
}

double LinearProgram::activity(std::size_t i, std::span<const double> x) const {
  double s = 0;
  for (const auto& t : rows_[i].terms) s += t.coef * x[t.var];
  return s;
}

double LinearProgram::objective(std::span<const double> x) const {
  double s = offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) s += vars_[j].cost * x[j];
  return s;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max(worst, vars_[j].lower - x[j]);
    worst = std::max(worst, x[j] - vars_[j].upper);
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double a = activity(i, x);
    switch (rows_[i].rel) {
      case Relation::le: worst = std::max(worst, a - rows_[i].rhs); break;
      case Relation::ge: worst = std::max(worst, rows_[i].rhs - a); break;
      case Relation::eq: worst = std::max(worst, std::abs(a - rows_[i].rhs)); break;
    }
  }
  return worst;
}

std::string LinearProgram::to_lp_format() const {
  auto name_of = [&](std::size_t j) {
    return vars_[j].name.empty() ? fmt::format("x{}", j) : vars_[j].name;
  };
  auto term = [](double c, const std::string& v, bool first) {
    if (first) return fmt::format("{:.17g} {}", c, v);
    return c < 0 ? fmt::format(" - {:.17g} {}", -c, v) : fmt::format(" + {:.17g} {}", c, v);
  };
  std::ostringstream os;
  os << "Minimize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].cost == 0) continue;
    os << ' ' << term(vars_[j].cost, name_of(j), first);
    first = false;
  }
  if (offset_ != 0) os << fmt::format(" + {:.17g} constant", offset_);
  if (first && offset_ == 0) os << " 0 " << (vars_.empty() ? "x0" : name_of(0));
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    os << ' ' << (r.name.empty() ? fmt::format("r{}", i) : r.name) << ':';
    bool f = true;
    for (const auto& t : r.terms) {
      os << ' ' << term(t.coef, name_of(t.var), f);
      f = false;
    }
    if (f) os << " 0 " << (vars_.empty() ? "x0" : name_of(0));
    const char* rel = r.rel == Relation::le ? "<=" : r.rel == Relation::ge ? ">=" : "=";
    os << ' ' << rel << ' ' << fmt::format("{:.17g}", r.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (std::isinf(vars_[j].upper))
      os << ' ' << name_of(j) << " >= " << fmt::format("{:.17g}", vars_[j].lower) << '\n';
    else
      os << ' ' << fmt::format("{:.17g}", vars_[j].lower) << " <= " << name_of(j)
         << " <= " << fmt::format("{:.17g}", vars_[j].upper) << '\n';
  }
  os << "End\n";
  return os.str();
}

std::string_view to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Simplex
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;
using DenseRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

struct Factor {
  std::vector<int> head;
  DenseRowMajor binv;
  int age = 0;  // pivots since the last refactorization
};

namespace {

struct SparseColumn {
  std::vector<int> index;
  std::vector<double> value;
};

enum class PrimalOutcome { optimal, unbounded, infeasible, lost_feasibility };
enum class DualOutcome { optimal, infeasible, lost_dual_feasibility };

class Simplex {
 public:
  Simplex(const LinearProgram& prob, const SimplexOptions& opt) : prob_(prob), opt_(opt) {
    n_ = static_cast<int>(prob.num_variables());
    m_ = static_cast<int>(prob.num_rows());
    total_ = n_ + m_;
    cols_.resize(n_);
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : prob.row(i).terms) {
        if (t.coef == 0.0) continue;
        auto& c = cols_[t.var];
        if (!c.index.empty() && c.index.back() == i) {
          c.value.back() += t.coef;  // repeated term in one row
          continue;
        }
        c.index.push_back(i);
        c.value.push_back(t.coef);
      }
    }
    row_vars_.resize(m_);
    row_vals_.resize(m_);
    for (int j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < cols_[j].index.size(); ++k) {
        row_vars_[cols_[j].index[k]].push_back(j);
        row_vals_[cols_[j].index[k]].push_back(cols_[j].value[k]);
      }
    cost_.assign(total_, 0.0);
    lb_.assign(total_, 0.0);
    ub_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      cost_[j] = prob.variable(j).cost;
      lb_[j] = prob.variable(j).lower;
      ub_[j] = prob.variable(j).upper;
    }
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const auto& r = prob.row(i);
      b_[i] = r.rhs;
      // a.x + s = b
      switch (r.rel) {
        case Relation::le: lb_[n_ + i] = 0.0; ub_[n_ + i] = kInf; break;
        case Relation::ge: lb_[n_ + i] = -kInf; ub_[n_ + i] = 0.0; break;
        case Relation::eq: lb_[n_ + i] = 0.0; ub_[n_ + i] = 0.0; break;
      }
    }
    x_.assign(total_, 0.0);
    status_.assign(total_, VarStatus::at_lower);
    pos_.assign(total_, -1);
    head_.assign(m_, -1);
    y_.assign(m_, 0.0);
    d_.assign(total_, 0.0);
  }

  LPSolution run() {
    load_basis();
    compute_xb();
    LPStatus status = LPStatus::optimal;
    for (int round = 0;; ++round) {
      if (round > 20) throw SolverError("simplex: repeated loss of feasibility");
      if (max_primal_violation() <= opt_.feasibility_tol) {
        auto out = primal(false);
        if (out == PrimalOutcome::optimal) break;
        if (out == PrimalOutcome::unbounded) {
          status = LPStatus::unbounded;
          break;
        }
        continue;  // lost feasibility: re-enter the dispatcher
      }
      if (make_dual_feasible()) {
        auto out = dual();
        if (out == DualOutcome::infeasible) {
          status = LPStatus::infeasible;
          break;
        }
        continue;
      }
      auto out = primal(true);
      if (out == PrimalOutcome::infeasible) {
        status = LPStatus::infeasible;
        break;
      }
    }
    return extract(status);
  }

 private:
  // -- linear algebra -------------------------------------------------------

  double dot_column(int j, const std::vector<double>& v) const {
    if (j >= n_) return v[j - n_];
    double s = 0;
    const auto& c = cols_[j];
    for (std::size_t k = 0; k < c.index.size(); ++k) s += c.value[k] * v[c.index[k]];
    return s;
  }

  void ftran(int j, std::vector<double>& out) const {
    out.assign(m_, 0.0);
    if (j >= n_) {
      for (int r = 0; r < m_; ++r) out[r] = binv_(r, j - n_);
      return;
    }
    const auto& c = cols_[j];
    for (std::size_t k = 0; k < c.index.size(); ++k) {
      const double v = c.value[k];
      const int i = c.index[k];
      for (int r = 0; r < m_; ++r) out[r] += v * binv_(r, i);
    }
  }

  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return true;
    // Basic slacks are unit columns, so only the block of structural columns
    // restricted to rows without a basic slack needs a dense factorization.
    std::vector<int> slack_pos(m_, -1);  // row -> basis position of its slack
    std::vector<int> struct_pos;         // basis positions holding structurals
    for (int r = 0; r < m_; ++r) {
      if (head_[r] >= n_)
        slack_pos[head_[r] - n_] = r;
      else
        struct_pos.push_back(r);
    }
    const int k = static_cast<int>(struct_pos.size());
    std::vector<int> block_row(m_, -1);  // row -> index within the block
    std::vector<int> free_rows;
    for (int i = 0; i < m_; ++i)
      if (slack_pos[i] < 0) {
        block_row[i] = static_cast<int>(free_rows.size());
        free_rows.push_back(i);
      }
    if (static_cast<int>(free_rows.size()) != k) return false;
    binv_.setZero(m_, m_);
    for (int i = 0; i < m_; ++i)
      if (slack_pos[i] >= 0) binv_(slack_pos[i], i) = 1.0;
    if (k == 0) return true;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(k, k);
    for (int t = 0; t < k; ++t) {
      const auto& c = cols_[head_[struct_pos[t]]];
      for (std::size_t e = 0; e < c.index.size(); ++e)
        if (block_row[c.index[e]] >= 0) block(block_row[c.index[e]], t) = c.value[e];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    const double max_pivot = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
    if (!(min_pivot > 1e-11 * std::max(1.0, max_pivot))) return false;
    const Eigen::MatrixXd kinv = lu.inverse();
    if (!kinv.allFinite()) return false;
    for (int t = 0; t < k; ++t)
      for (int u = 0; u < k; ++u) binv_(struct_pos[t], free_rows[u]) = kinv(t, u);
    // Slack rows: e_s - A[s, J] K^-1 on the block columns.
    for (int t = 0; t < k; ++t) {
      const auto& c = cols_[head_[struct_pos[t]]];
      for (std::size_t e = 0; e < c.index.size(); ++e) {
        const int s = c.index[e];
        if (slack_pos[s] < 0) continue;
        const double a = c.value[e];
        auto row = binv_.row(slack_pos[s]);
        for (int u = 0; u < k; ++u) row(free_rows[u]) -= a * kinv(t, u);
      }
    }
    return true;
  }

  void pivot(int r, const std::vector<double>& alpha) {
    const double piv = alpha[r];
    binv_.row(r) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      binv_.row(i) -= alpha[i] * binv_.row(r);
    }
    ++since_refactor_;
  }

  // -- basis management -----------------------------------------------------

  void slack_basis() {
    for (int j = 0; j < n_; ++j) {
      status_[j] = VarStatus::at_lower;
      pos_[j] = -1;
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = VarStatus::basic;
      pos_[n_ + i] = i;
    }
    binv_ = DenseRowMajor::Identity(m_, m_);
    since_refactor_ = 0;
  }

  void load_basis() {
    const Basis* ws = opt_.warm_start;
    bool ok = false;
    if (ws != nullptr && !ws->empty()) {
      for (int j = 0; j < total_; ++j) {
        VarStatus s;
        if (j < n_)
          s = j < static_cast<int>(ws->structural.size()) ? ws->structural[j] : VarStatus::at_lower;
        else
          s = (j - n_) < static_cast<int>(ws->logical.size()) ? ws->logical[j - n_]
                                                               : VarStatus::basic;
        status_[j] = s;
      }
      int count = 0;
      for (int j = 0; j < total_; ++j) {
        pos_[j] = -1;
        if (status_[j] == VarStatus::basic) {
          if (count < m_) head_[count] = j;
          pos_[j] = count++;
        }
      }
      if (count == m_) ok = adopt_factor(ws->factor.get()) || refactor();
    }
    if (!ok) slack_basis();
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::basic) continue;
      if (status_[j] == VarStatus::at_lower && std::isinf(lb_[j])) status_[j] = VarStatus::at_upper;
      if (status_[j] == VarStatus::at_upper && std::isinf(ub_[j])) status_[j] = VarStatus::at_lower;
      x_[j] = status_[j] == VarStatus::at_lower ? lb_[j] : ub_[j];
    }
  }

  // Takes over a stored inverse when its basis is the one just loaded.
  bool adopt_factor(const Factor* f) {
    if (f == nullptr || static_cast<int>(f->head.size()) != m_ || f->binv.rows() != m_ ||
        f->age >= opt_.refactor_interval)
      return false;
    for (int j : f->head)
      if (j < 0 || j >= total_ || status_[j] != VarStatus::basic) return false;
    head_ = f->head;
    for (int r = 0; r < m_; ++r) pos_[head_[r]] = r;
    binv_ = f->binv;
    since_refactor_ = f->age;
    return true;
  }

  void compute_xb() {
    std::vector<double> r(b_);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::basic || x_[j] == 0.0) continue;
      if (j >= n_) {
        r[j - n_] -= x_[j];
      } else {
        const auto& c = cols_[j];
        for (std::size_t k = 0; k < c.index.size(); ++k) r[c.index[k]] -= c.value[k] * x_[j];
      }
    }
    for (int p = 0; p < m_; ++p) {
      double s = 0;
      for (int i = 0; i < m_; ++i) s += binv_(p, i) * r[i];
      x_[head_[p]] = s;
    }
  }

  void refresh() {
    if (!refactor()) {
      // Numerical trouble: restart from the slack basis rather than continue
      // with an inaccurate inverse.
      slack_basis();
      for (int j = 0; j < total_; ++j)
        if (status_[j] != VarStatus::basic)
          x_[j] = status_[j] == VarStatus::at_lower ? lb_[j] : ub_[j];
      ++slack_restarts_;
      if (slack_restarts_ > 5) throw SolverError("simplex: basis matrix is numerically singular");
    }
    compute_xb();
  }

  double violation(int j) const {
    if (x_[j] < lb_[j]) return lb_[j] - x_[j];
    if (x_[j] > ub_[j]) return x_[j] - ub_[j];
    return 0.0;
  }

  double max_primal_violation() const {
    double w = 0;
    for (int r = 0; r < m_; ++r) w = std::max(w, violation(head_[r]));
    return w;
  }

  void compute_duals(const std::vector<double>& cb) {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      if (cb[r] == 0.0) continue;
      const double c = cb[r];
      for (int i = 0; i < m_; ++i) y_[i] += c * binv_(r, i);
    }
  }

  std::vector<double> phase2_cb() const {
    std::vector<double> cb(m_);
    for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
    return cb;
  }

  void tick() {
    ++iterations_;
    if (iterations_ > opt_.max_iterations)
      throw ResourceError(fmt::format("simplex: iteration cap {} exceeded", opt_.max_iterations));
    if (opt_.deadline && (iterations_ & 15) == 0 && Clock::now() > *opt_.deadline)
      throw ResourceError("simplex: deadline reached");
  }

  // Counts pivots whose objective change is negligible; a long run of them
  // switches to Bland's rule until real progress resumes.
  void note_step(double progress) {
    if (progress <= 1e-9) {
      if (++degenerate_run_ > opt_.degenerate_limit) bland_ = true;
    } else {
      degenerate_run_ = 0;
      bland_ = false;
    }
  }

  // Flips boxed nonbasics to the bound their reduced cost prefers; returns
  // false if some unboxed nonbasic has the wrong sign.
  bool make_dual_feasible() {
    compute_duals(phase2_cb());
    std::vector<int> flips;
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
      const double dj = cost_[j] - dot_column(j, y_);
      const bool wrong = (status_[j] == VarStatus::at_lower && dj < -opt_.optimality_tol) ||
                         (status_[j] == VarStatus::at_upper && dj > opt_.optimality_tol);
      if (!wrong) continue;
      if (std::isinf(lb_[j]) || std::isinf(ub_[j])) return false;
      flips.push_back(j);
    }
    for (int j : flips) {
      status_[j] = status_[j] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
      x_[j] = status_[j] == VarStatus::at_lower ? lb_[j] : ub_[j];
    }
    if (!flips.empty()) compute_xb();
    return true;
  }

  // -- primal simplex -------------------------------------------------------

  PrimalOutcome primal(bool phase1) {
    std::vector<double> cb(m_), alpha;
    const double ftol = opt_.feasibility_tol;
    bland_ = false;
    degenerate_run_ = 0;
    for (;;) {
      if (since_refactor_ >= opt_.refactor_interval) {
        refresh();
        if (!phase1 && max_primal_violation() > 10 * ftol) return PrimalOutcome::lost_feasibility;
      }
      if (phase1) {
        if (max_primal_violation() <= ftol) return PrimalOutcome::optimal;
        for (int r = 0; r < m_; ++r) {
          const int j = head_[r];
          cb[r] = x_[j] < lb_[j] - ftol ? -1.0 : (x_[j] > ub_[j] + ftol ? 1.0 : 0.0);
        }
      } else {
        cb = phase2_cb();
      }
      compute_duals(cb);

      int q = -1;
      double best = 0;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
        const double cj = phase1 ? 0.0 : cost_[j];
        const double dj = cj - dot_column(j, y_);
        const bool eligible = (status_[j] == VarStatus::at_lower && dj < -opt_.optimality_tol) ||
                              (status_[j] == VarStatus::at_upper && dj > opt_.optimality_tol);
        if (!eligible) continue;
        if (bland_) {
          q = j;
          best = std::abs(dj);
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
        }
      }
      if (q < 0) {
        if (!phase1) return PrimalOutcome::optimal;
        return max_primal_violation() <= 100 * opt_.feasibility_tol ? PrimalOutcome::optimal
                                                                    : PrimalOutcome::infeasible;
      }
      tick();
      ftran(q, alpha);
      const double dir = status_[q] == VarStatus::at_lower ? 1.0 : -1.0;

      // Harris two-pass ratio test; phase 1 stops at the first breakpoint.
      auto limit_of = [&](int r, double slack_tol, double* target) -> double {
        const double a = alpha[r];
        if (std::abs(a) <= opt_.pivot_tol) return kInf;
        const double rate = -dir * a;
        const int j = head_[r];
        const double xv = x_[j];
        double tgt;
        if (rate < 0) {
          if (phase1 && xv < lb_[j] - ftol) return kInf;
          tgt = (phase1 && xv > ub_[j] + ftol) ? ub_[j] : lb_[j];
          if (std::isinf(tgt)) return kInf;
          *target = tgt;
          return (xv - tgt + slack_tol) / -rate;
        }
        if (phase1 && xv > ub_[j] + ftol) return kInf;
        tgt = (phase1 && xv < lb_[j] - ftol) ? lb_[j] : ub_[j];
        if (std::isinf(tgt)) return kInf;
        *target = tgt;
        return (tgt - xv + slack_tol) / rate;
      };

      const double flip = ub_[q] - lb_[q];
      int leave = -1;
      double step = kInf;
      double leave_target = 0;
      if (bland_) {
        double tmin = flip;
        for (int r = 0; r < m_; ++r) {
          double tgt = 0;
          const double t = std::max(0.0, limit_of(r, 0.0, &tgt));
          if (t < tmin - 1e-12 ||
              (leave >= 0 && std::abs(t - tmin) <= 1e-12 && head_[r] < head_[leave])) {
            tmin = t;
            leave = r;
            leave_target = tgt;
          }
        }
        step = tmin;
      } else {
        double tmax = flip;
        for (int r = 0; r < m_; ++r) {
          double tgt = 0;
          tmax = std::min(tmax, limit_of(r, ftol, &tgt));
        }
        if (flip <= tmax) {
          step = flip;
        } else {
          double biggest = 0;
          for (int r = 0; r < m_; ++r) {
            double tgt = 0;
            const double t = limit_of(r, 0.0, &tgt);
            if (t <= tmax && std::abs(alpha[r]) > biggest) {
              biggest = std::abs(alpha[r]);
              leave = r;
              leave_target = tgt;
              step = std::max(0.0, t);
            }
          }
        }
      }
      if (std::isinf(step)) {
        if (phase1) throw SolverError("simplex: unbounded phase-1 ray (numerical trouble)");
        return PrimalOutcome::unbounded;
      }

      // Apply the step.
      x_[q] += dir * step;
      for (int r = 0; r < m_; ++r)
        if (alpha[r] != 0.0) x_[head_[r]] -= dir * step * alpha[r];
      note_step(step * best);
      if (leave < 0) {
        status_[q] = status_[q] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
        x_[q] = status_[q] == VarStatus::at_lower ? lb_[q] : ub_[q];
        continue;
      }
      const int j = head_[leave];
      x_[j] = leave_target;
      status_[j] = leave_target == lb_[j] ? VarStatus::at_lower : VarStatus::at_upper;
      pos_[j] = -1;
      pivot(leave, alpha);
      head_[leave] = q;
      status_[q] = VarStatus::basic;
      pos_[q] = leave;
    }
  }

  // -- dual simplex ---------------------------------------------------------

  void apply_flips(const std::vector<int>& flips) {
    std::vector<double> shift(m_, 0.0);
    for (int j : flips) {
      const double delta = status_[j] == VarStatus::at_lower ? ub_[j] - lb_[j] : lb_[j] - ub_[j];
      status_[j] = status_[j] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
      x_[j] = status_[j] == VarStatus::at_lower ? lb_[j] : ub_[j];
      if (j >= n_) {
        shift[j - n_] += delta;
      } else {
        const auto& c = cols_[j];
        for (std::size_t k = 0; k < c.index.size(); ++k) shift[c.index[k]] += c.value[k] * delta;
      }
    }
    for (int p = 0; p < m_; ++p) {
      double s = 0;
      for (int i = 0; i < m_; ++i) s += binv_(p, i) * shift[i];
      x_[head_[p]] -= s;
    }
  }

  DualOutcome dual() {
    std::vector<double> rho(m_), alpha, alpha_row(total_, 0.0), d(total_, 0.0);
    const double ftol = opt_.feasibility_tol;
    bland_ = false;
    degenerate_run_ = 0;
    bool stale_duals = true;
    for (;;) {
      if (since_refactor_ >= opt_.refactor_interval) {
        refresh();
        stale_duals = true;
      }
      if (stale_duals) {
        compute_duals(phase2_cb());
        for (int j = 0; j < total_; ++j)
          d[j] = status_[j] == VarStatus::basic ? 0.0 : cost_[j] - dot_column(j, y_);
      }
      stale_duals = false;

      // Dual steepest edge: violation scaled by the norm of the row of B^-1,
      // which the explicit inverse gives exactly.
      int r = -1;
      double worst = 0;
      for (int p = 0; p < m_; ++p) {
        const double v = violation(head_[p]);
        if (v <= ftol) continue;
        if (bland_) {
          if (r < 0 || head_[p] < head_[r]) r = p;
          continue;
        }
        const double score = v * v / std::max(binv_.row(p).squaredNorm(), 1e-12);
        if (score > worst) {
          worst = score;
          r = p;
        }
      }
      if (r < 0) return DualOutcome::optimal;
      tick();
      const int leaving = head_[r];
      const bool below = x_[leaving] < lb_[leaving];
      for (int i = 0; i < m_; ++i) rho[i] = binv_(r, i);
      // Pivot row rho^T A, accumulated over the nonzeros of rho.
      std::fill(alpha_row.begin(), alpha_row.begin() + n_, 0.0);
      for (int i = 0; i < m_; ++i) {
        const double ri = rho[i];
        alpha_row[n_ + i] = ri;
        if (ri == 0.0) continue;
        const auto& vars = row_vars_[i];
        const auto& vals = row_vals_[i];
        for (std::size_t k = 0; k < vars.size(); ++k) alpha_row[vars[k]] += ri * vals[k];
      }

      // Candidate entering variables and their dual ratios.
      struct Cand {
        int j;
        double ratio;
        double a;
      };
      std::vector<Cand> cands;
      for (int j = 0; j < total_; ++j) {
        if (status_[j] == VarStatus::basic || lb_[j] == ub_[j]) continue;
        const double a = alpha_row[j];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double dj = d[j];
        const bool at_lower = status_[j] == VarStatus::at_lower;
        bool ok;
        if (below)
          ok = (at_lower && a < 0) || (!at_lower && a > 0);
        else
          ok = (at_lower && a > 0) || (!at_lower && a < 0);
        if (!ok) continue;
        const double dclip = at_lower ? std::max(dj, 0.0) : std::min(dj, 0.0);
        cands.push_back({j, std::abs(dclip) / std::abs(a), a});
      }
      if (cands.empty()) return DualOutcome::infeasible;

      int q = -1;
      double aq = 0;
      std::vector<int> flips;
      if (bland_) {
        double tmin = kInf;
        for (const auto& c : cands) tmin = std::min(tmin, c.ratio);
        for (const auto& c : cands)
          if (c.ratio <= tmin + 1e-12 && (q < 0 || c.j < q)) {
            q = c.j;
            aq = c.a;
          }
      } else {
        // Bound-flipping ratio test: pass boxed breakpoints while the dual
        // objective slope stays nonnegative.
        std::sort(cands.begin(), cands.end(), [](const Cand& u, const Cand& v) {
          return u.ratio != v.ratio ? u.ratio < v.ratio : u.j < v.j;
        });
        double slope = std::abs(x_[leaving] - (below ? lb_[leaving] : ub_[leaving]));
        std::size_t k = 0;
        for (; k < cands.size(); ++k) {
          const int j = cands[k].j;
          const double range = ub_[j] - lb_[j];
          if (std::isinf(range)) break;
          const double next = slope - std::abs(cands[k].a) * range;
          if (next < -1e-12) break;
          slope = next;
          flips.push_back(j);
        }
        if (k == cands.size()) {
          if (slope > ftol) return DualOutcome::infeasible;
          // The last breakpoint closes the gap: it enters instead of flipping.
          k = cands.size() - 1;
          flips.pop_back();
        }
        // Among near-ties at the entering breakpoint prefer the largest pivot.
        const double limit = cands[k].ratio + 1e-12;
        double biggest = 0;
        for (std::size_t t = k; t < cands.size() && cands[t].ratio <= limit; ++t)
          if (std::abs(cands[t].a) > biggest) {
            biggest = std::abs(cands[t].a);
            q = cands[t].j;
            aq = cands[t].a;
          }
      }
      if (q < 0) return DualOutcome::infeasible;

      ftran(q, alpha);
      if (std::abs(alpha[r] - aq) > 1e-7 * (1.0 + std::abs(aq))) {
        // Row and column pivot disagree: the inverse has drifted.
        since_refactor_ = opt_.refactor_interval;
        continue;
      }
      if (!flips.empty()) apply_flips(flips);
      const double target = below ? lb_[leaving] : ub_[leaving];
      const double delta = (x_[leaving] - target) / alpha[r];
      x_[q] += delta;
      for (int p = 0; p < m_; ++p)
        if (alpha[p] != 0.0) x_[head_[p]] -= delta * alpha[p];
      x_[leaving] = target;
      note_step(std::abs(d[q] / aq) * std::abs(delta * alpha[r]));
      const double theta = d[q] / alpha[r];
      for (int i = 0; i < m_; ++i) y_[i] += theta * rho[i];
      for (int j = 0; j < total_; ++j)
        if (status_[j] != VarStatus::basic) d[j] -= theta * alpha_row[j];
      d[q] = 0.0;
      d[leaving] = -theta;
      status_[leaving] = below ? VarStatus::at_lower : VarStatus::at_upper;
      pos_[leaving] = -1;
      pivot(r, alpha);
      head_[r] = q;
      status_[q] = VarStatus::basic;
      pos_[q] = r;
    }
  }

  // -- output ---------------------------------------------------------------

  LPSolution extract(LPStatus status) {
    LPSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    if (status == LPStatus::optimal) {
      // A few product updates keep the inverse accurate enough; past that the
      // final values come from a fresh factorization.
      if (since_refactor_ > kCleanAge)
        refresh();
      else
        compute_xb();
      compute_duals(phase2_cb());
      sol.primal.assign(x_.begin(), x_.begin() + n_);
      sol.duals = y_;
      sol.reduced_costs.resize(n_);
      for (int j = 0; j < n_; ++j)
        sol.reduced_costs[j] = status_[j] == VarStatus::basic ? 0.0 : cost_[j] - dot_column(j, y_);
      sol.objective = prob_.objective(sol.primal);
    }
    sol.basis.structural.assign(status_.begin(), status_.begin() + n_);
    sol.basis.logical.assign(status_.begin() + n_, status_.end());
    if (opt_.keep_factor && status == LPStatus::optimal)
      sol.basis.factor = std::make_shared<const Factor>(Factor{head_, binv_, since_refactor_});
    return sol;
  }

  static constexpr int kCleanAge = 16;

  const LinearProgram& prob_;
  const SimplexOptions& opt_;
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<SparseColumn> cols_;
  std::vector<std::vector<int>> row_vars_;  // row-wise copy of the structurals
  std::vector<std::vector<double>> row_vals_;
  std::vector<double> cost_, lb_, ub_, b_;
  std::vector<int> head_, pos_;
  std::vector<VarStatus> status_;
  std::vector<double> x_, y_, d_;
  DenseRowMajor binv_;
  std::int64_t iterations_ = 0;
  int since_refactor_ = 0;
  int slack_restarts_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
};

}  // namespace

LPSolution solve_lp(const LinearProgram& prob, const SimplexOptions& options) {
  if (!(options.tol > 0)) throw ContractViolation("solve_lp: tol must be positive");
  prob.validate();
  Simplex simplex(prob, options);
  return simplex.run();
}

}  // namespace fairdnf::lp
