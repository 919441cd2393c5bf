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

#include "fairdnf/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {

namespace {

using Clock = std::chrono::steady_clock;

void check_features(const RuleSet& rs, const BinaryDataset& ds) {
  for (const auto& c : rs.clauses)
    for (int j : c.literals)
      if (j < 0 || static_cast<std::size_t>(j) >= ds.p())
        throw ContractViolation(fmt::format(
            "rule set uses feature {} but the dataset has {} features", j, ds.p()));
}

double max_gap(const std::vector<std::optional<double>>& rates) {
  double lo = 1.0, hi = 0.0;
  bool any = false;
  for (const auto& r : rates) {
    if (!r) continue;
    lo = std::min(lo, *r);
    hi = std::max(hi, *r);
    any = true;
  }
  return any ? hi - lo : 0.0;
}

// Runs body(0..n-1) on up to `jobs` threads. The first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<int> predict(const RuleSet& rs, const BinaryDataset& ds) {
  check_features(rs, ds);
  const Bitset cov = coverage(rs, ds);
  std::vector<int> out(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) out[i] = cov.test(i) ? 1 : -1;
  return out;
}

MetricsReport evaluate(const RuleSet& rs, const BinaryDataset& ds) {
  const auto pred = predict(rs, ds);
  MetricsReport m;
  m.clauses = rs.clauses.size();
  m.complexity = rs.total_complexity();
  const std::size_t G = ds.num_groups();
  std::vector<double> fn(G, 0.0), fp(G, 0.0);
  m.groups.resize(G);
  for (std::size_t g = 0; g < G; ++g) m.groups[g].name = ds.group_names()[g];

  // Per-row count of covering clauses, with multiplicity, for the Hamming loss.
  std::vector<int> hits(ds.n(), 0);
  for (std::size_t k = 0; k < rs.clauses.size(); ++k) {
    const int mult = k < rs.multiplicity.size() ? rs.multiplicity[k] : 1;
    const Bitset cov = coverage(rs.clauses[k], ds);
    for (std::size_t i = 0; i < ds.n(); ++i)
      if (cov.test(i)) hits[i] += mult;
  }

  for (std::size_t i = 0; i < ds.n(); ++i) {
    const double w = ds.weight(i);
    const auto g = static_cast<std::size_t>(ds.group(i));
    m.rows += w;
    if (ds.label(i) == 1) {
      m.groups[g].positives += w;
      if (pred[i] != 1) {
        fn[g] += w;
        m.errors += w;
        m.hamming_loss += w;
      }
    } else {
      m.groups[g].negatives += w;
      m.hamming_loss += w * hits[i];
      if (pred[i] == 1) {
        fp[g] += w;
        m.errors += w;
      }
    }
  }
  m.accuracy = m.rows > 0 ? 1.0 - m.errors / m.rows : 0.0;

  std::vector<std::optional<double>> fnr(G), fpr(G);
  for (std::size_t g = 0; g < G; ++g) {
    auto& gr = m.groups[g];
    if (gr.positives > 0)
      gr.fnr = fn[g] / gr.positives;
    else if (gr.negatives > 0)
      spdlog::warn("evaluate: group {} has no positives; FNR undefined and excluded", gr.name);
    if (gr.negatives > 0)
      gr.fpr = fp[g] / gr.negatives;
    else if (gr.positives > 0)
      spdlog::warn("evaluate: group {} has no negatives; FPR undefined and excluded", gr.name);
    fnr[g] = gr.fnr;
    fpr[g] = gr.fpr;
  }
  m.fnr_gap = max_gap(fnr);
  m.fpr_gap = max_gap(fpr);
  m.eq_opp_gap = m.fnr_gap;
  m.eq_odds_gap = std::max(m.fnr_gap, m.fpr_gap);
  return m;
}

bool CellResult::feasible() const {
  return !folds.empty() &&
         std::all_of(folds.begin(), folds.end(), [](const FoldOutcome& f) { return f.ok; });
}

Summary summarize(const std::vector<double>& v) {
  Summary s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

std::vector<CellResult> cross_validate(const BinaryDataset& ds, const BinFeatureMap& map,
                                       const FoldPlan& folds, const std::vector<GridCell>& grid,
                                       std::uint64_t seed, const CvOptions& opt) {
  if (grid.empty()) throw ConfigError("cross_validate: empty grid");
  if (folds.assignments.size() != ds.n())
    throw ContractViolation("cross_validate: fold plan does not match the dataset");
  for (const auto& cell : grid) {
    cell.master.validate();
    cell.colgen.validate();
  }
  const std::size_t K = folds.k;
  std::vector<CellResult> out(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    out[c].cell = grid[c];
    out[c].folds.resize(K);
  }
  parallel_for(grid.size() * K, opt.jobs, [&](std::size_t task) {
    const std::size_t c = task / K;
    const int f = static_cast<int>(task % K);
    const auto tr = folds.train_rows(f);
    const auto te = folds.test_rows(f);
    const BinaryDataset train_ds = ds.subset(tr);
    const BinaryDataset test_ds = ds.subset(te);
    FoldOutcome& fo = out[c].folds[static_cast<std::size_t>(f)];
    fo.fold = f;
    const auto t0 = Clock::now();
    try {
      auto r = train(train_ds, map, grid[c].master, grid[c].colgen, seed + static_cast<std::uint64_t>(f));
      fo.rules = std::move(r.rules);
      fo.ok = true;
    } catch (const InfeasibleError& e) {
      fo.error = e.what();
    } catch (const ResourceError& e) {
      fo.error = e.what();
    }
    fo.seconds = since(t0);
    if (!fo.ok) {
      spdlog::warn("cell {} fold {}: {}", c, f, fo.error);
      return;
    }
    fo.train = evaluate(fo.rules, train_ds);
    fo.test = evaluate(fo.rules, test_ds);
  });
  return out;
}

void flag_dominated(std::vector<FrontierPoint>& pts) {
  for (auto& a : pts) {
    a.dominated = false;
    for (const auto& b : pts) {
      if (&a == &b) continue;
      const bool no_worse = b.test_accuracy.mean >= a.test_accuracy.mean &&
                            b.test_gap.mean <= a.test_gap.mean;
      const bool better = b.test_accuracy.mean > a.test_accuracy.mean ||
                          b.test_gap.mean < a.test_gap.mean;
      if (no_worse && better) {
        a.dominated = true;
        break;
      }
    }
  }
}

std::vector<FrontierPoint> frontier(const std::vector<CellResult>& cells) {
  // (metric, epsilon) -> best cell
  std::map<std::pair<int, double>, FrontierPoint> best;
  for (const auto& cell : cells) {
    if (!cell.feasible()) continue;
    const auto& mc = cell.cell.master;
    const FairnessMetric metric = mc.fairness.metric;
    std::vector<double> te_acc, tr_acc, te_gap, tr_gap;
    double cx = 0;
    for (const auto& f : cell.folds) {
      te_acc.push_back(f.test.accuracy);
      tr_acc.push_back(f.train.accuracy);
      te_gap.push_back(f.test.gap(metric));
      tr_gap.push_back(f.train.gap(metric));
      cx += f.test.complexity;
    }
    FrontierPoint p;
    p.metric = metric;
    p.epsilon = mc.fairness.epsilon1;
    p.C = mc.C;
    p.folds = cell.folds.size();
    p.test_accuracy = summarize(te_acc);
    p.train_accuracy = summarize(tr_acc);
    p.test_gap = summarize(te_gap);
    p.train_gap = summarize(tr_gap);
    p.complexity = cx / static_cast<double>(cell.folds.size());
    const auto key = std::make_pair(static_cast<int>(metric), p.epsilon);
    auto it = best.find(key);
    if (it == best.end() || p.test_accuracy.mean > it->second.test_accuracy.mean ||
        (p.test_accuracy.mean == it->second.test_accuracy.mean && p.C < it->second.C))
      best[key] = p;
  }
  std::vector<FrontierPoint> out;
  for (auto& [key, p] : best) out.push_back(p);
  flag_dominated(out);
  return out;
}

void FrontierPlan::validate() const {
  if (epsilons.empty() || C.empty()) throw ConfigError("frontier: empty phase-2 grid");
  if (phase1_epsilons.empty() || phase1_C.empty())
    throw ConfigError("frontier: empty phase-1 grid");
  for (const auto* grid : {&phase1_epsilons, &epsilons})
    for (double e : *grid)
      if (!(e >= 0 && e <= 1)) throw ConfigError("frontier: epsilon outside [0, 1]");
  for (const auto* grid : {&phase1_C, &C})
    for (double c : *grid)
      if (!(c >= 2)) throw ConfigError("frontier: C must be at least 2");
  if (objective == MasterObjective::zero_one && metric == FairnessMetric::equalized_odds)
    throw ConfigError("the 0-1 master does not support equalized odds");
  colgen.validate();
}

FrontierRun two_phase_frontier(const BinaryDataset& ds, const BinFeatureMap& map,
                               const FoldPlan& folds, const FrontierPlan& plan,
                               std::uint64_t seed, const CvOptions& opt) {
  plan.validate();
  if (folds.assignments.size() != ds.n())
    throw ContractViolation("two_phase_frontier: fold plan does not match the dataset");
  auto make = [&](double eps, double C) {
    MasterConfig mc;
    mc.C = C;
    mc.objective = plan.objective;
    mc.fairness.metric = plan.metric;
    mc.fairness.epsilon1 = eps;
    mc.validate();
    return mc;
  };

  const std::size_t K = folds.k;
  FrontierRun run;
  for (double eps : plan.epsilons)
    for (double C : plan.C) {
      CellResult cell;
      cell.cell = {make(eps, C), plan.colgen};
      cell.folds.resize(K);
      run.cells.push_back(std::move(cell));
    }
  run.pool_sizes.assign(K, 0);

  int max_D = 1;
  for (double C : plan.phase1_C) max_D = std::max(max_D, plan.colgen.pricing(C, 0).D);

  parallel_for(K, opt.jobs, [&](std::size_t fk) {
    const int f = static_cast<int>(fk);
    const std::uint64_t fseed = seed + static_cast<std::uint64_t>(f);
    const BinaryDataset train_ds = ds.subset(folds.train_rows(f));
    const BinaryDataset test_ds = ds.subset(folds.test_rows(f));
    const BinaryDataset cds = train_ds.compress();

    std::vector<Clause> warm;
    if (plan.colgen.warm_start) warm = mine_rules(cds, map, plan.colgen.mine_grid, max_D, fseed);
    std::set<Clause> pool;
    for (double eps : plan.phase1_epsilons)
      for (double C : plan.phase1_C) {
        try {
          auto cg = run_colgen(cds, make(eps, C), plan.colgen, warm, fseed);
          pool.insert(cg.pool.begin(), cg.pool.end());
          spdlog::info("fold {} phase 1 eps={} C={}: {} iterations, {}, pool {}", f, eps, C,
                       cg.trace.records.size(), to_string(cg.trace.reason), pool.size());
        } catch (const InfeasibleError& e) {
          spdlog::warn("fold {} phase 1 eps={} C={}: {}", f, eps, C, e.what());
        }
      }
    run.pool_sizes[fk] = pool.size();

    for (auto& cell : run.cells) {
      const MasterConfig& mc = cell.cell.master;
      std::vector<Clause> fit;
      for (const auto& c : pool)
        if (c.complexity() <= mc.C) fit.push_back(c);
      FoldOutcome& fo = cell.folds[fk];
      fo.fold = f;
      const auto t0 = Clock::now();
      try {
        fo.rules = solve_master_ip(cds, fit, mc, plan.colgen).rules;
        fo.ok = true;
      } catch (const InfeasibleError& e) {
        fo.error = e.what();
      } catch (const ResourceError& e) {
        fo.error = e.what();
      }
      fo.seconds = since(t0);
      if (!fo.ok) {
        spdlog::warn("fold {} eps={} C={}: {}", f, mc.fairness.epsilon1, mc.C, fo.error);
        continue;
      }
      fo.train = evaluate(fo.rules, train_ds);
      fo.test = evaluate(fo.rules, test_ds);
    }
  });
  run.points = frontier(run.cells);
  return run;
}

}  // namespace fairdnf
