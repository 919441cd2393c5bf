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

#include "fairdnf/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string infeasibility_message(const MasterConfig& cfg) {
  const auto& f = cfg.fairness;
  if (f.metric == FairnessMetric::equalized_odds)
    return fmt::format(
        "master relaxation is infeasible under equalized odds with epsilon1 = {} and "
        "epsilon2 = {}; loosen one of them",
        f.epsilon1, f.eps2());
  return fmt::format("master relaxation is infeasible with fairness tolerance epsilon1 = {}",
                     f.epsilon1);
}

}  // namespace

void ColGenConfig::validate() const {
  if (!(time_limit > 0) || !(pricing_time_limit > 0) || !(mip_time_limit > 0))
    throw ConfigError("time limits must be positive");
  if (max_columns == 0) throw ConfigError("max_columns must be positive");
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (D && *D < 1) throw ConfigError("D must be at least 1");
  if (max_rows == 0 || max_nonzeros == 0) throw ConfigError("subsample budgets must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
  mine_grid.validate();
}

PricingConfig ColGenConfig::pricing(double C, std::uint64_t seed) const {
  PricingConfig pc = PricingConfig::for_complexity(C);
  if (D) pc.D = *D;
  pc.time_limit = pricing_time_limit;
  pc.max_columns = max_columns;
  pc.max_rows = max_rows;
  pc.max_nonzeros = max_nonzeros;
  pc.tol = tol;
  pc.seed = seed;
  return pc;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::priced_out: return "priced_out";
    case Termination::time_limit: return "time_limit";
    case Termination::cycling: return "cycling";
    case Termination::iteration_limit: return "iteration_limit";
    case Termination::sample_exhausted: return "sample_exhausted";
  }
  return "?";
}

std::string ColGenTrace::to_csv() const {
  std::string out = "iteration,objective,best_rho,columns_added,elapsed_s,source,lp_s,pricing_s\n";
  for (const auto& r : records)
    out += fmt::format("{},{:.10g},{:.10g},{},{:.4f},{},{:.4f},{:.4f}\n", r.iteration, r.objective,
                       r.best_rho, r.columns_added, r.elapsed, r.source, r.lp_seconds,
                       r.pricing_seconds);
  return out;
}

ColGenResult run_colgen(const BinaryDataset& ds, const MasterConfig& cfg,
                        const ColGenConfig& ccfg, const std::vector<Clause>& warm,
                        std::uint64_t seed) {
  cfg.validate();
  ccfg.validate();
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(ccfg.time_limit));
  const int D = ccfg.pricing(cfg.C, seed).D;

  ColGenResult out;
  std::set<Clause> seen;
  std::vector<Clause> cache;
  std::size_t dropped = 0;
  for (const auto& c : warm) {
    if (c.literals.empty() || static_cast<int>(c.literals.size()) > D || c.complexity() > cfg.C) {
      ++dropped;
      continue;
    }
    if (seen.insert(c).second) out.pool.push_back(c);
  }
  if (dropped > 0) spdlog::debug("colgen: {} warm-start clauses exceed the literal cap", dropped);
  if (out.pool.size() > ccfg.warm_pool_limit) {
    // Keep the clauses that price best against the empty master.
    MasterModel empty = build_master({}, ds, cfg, /*allow_empty_pool=*/true);
    const auto sol = lp::solve_lp(empty.lp);
    if (sol.status != lp::LPStatus::optimal) throw InfeasibleError(infeasibility_message(cfg));
    const DualSolution d0 = DualSolution::from_lp(empty, sol);
    std::vector<PricedColumn> ranked;
    ranked.reserve(out.pool.size());
    for (auto& c : out.pool) {
      const double rho = reduced_cost(c, ds, d0, cfg.fairness);
      ranked.push_back({std::move(c), rho});
    }
    rank_columns(ranked, ranked.size());
    out.pool.clear();
    for (auto& pc : ranked)
      (out.pool.size() < ccfg.warm_pool_limit ? out.pool : cache).push_back(std::move(pc.clause));
    // Cached clauses join the pool only when priced in.
    for (const auto& c : cache) seen.erase(c);
  }

  MasterModel model = build_master(out.pool, ds, cfg, /*allow_empty_pool=*/true);
  lp::Basis basis;
  bool have_basis = false;
  auto& trace = out.trace;

  for (int it = 1;; ++it) {
    if (it > ccfg.max_iterations) {
      trace.reason = Termination::iteration_limit;
      break;
    }
    lp::SimplexOptions lpo;
    lpo.tol = ccfg.tol;
    lpo.deadline = deadline;
    lpo.warm_start = have_basis ? &basis : nullptr;
    lp::LPSolution sol;
    const auto lp_start = Clock::now();
    try {
      sol = lp::solve_lp(model.lp, lpo);
    } catch (const ResourceError&) {
      if (Clock::now() < deadline) throw;
      trace.reason = Termination::time_limit;
      break;
    }
    if (sol.status == lp::LPStatus::infeasible) throw InfeasibleError(infeasibility_message(cfg));
    if (sol.status == lp::LPStatus::unbounded)
      throw SolverError("restricted master relaxation is unbounded");
    basis = sol.basis;
    have_basis = true;
    out.objective = sol.objective;

    IterationRecord rec;
    rec.lp_seconds = since(lp_start);
    rec.iteration = it;
    rec.objective = sol.objective;
    rec.source = "none";
    const auto pricing_start = Clock::now();
    auto finish = [&](Termination why) {
      rec.pricing_seconds = since(pricing_start);
      rec.elapsed = since(start);
      trace.records.push_back(rec);
      trace.reason = why;
    };

    const double remaining = std::chrono::duration<double>(deadline - Clock::now()).count();
    if (remaining <= 0) {
      finish(Termination::time_limit);
      break;
    }
    const DualSolution duals = DualSolution::from_lp(model, sol);
    PricingConfig pcfg = ccfg.pricing(cfg.C, seed + static_cast<std::uint64_t>(it));
    pcfg.time_limit = std::min(pcfg.time_limit, remaining);

    std::vector<PricedColumn> cols;
    if (!cache.empty()) {
      for (const auto& c : cache) {
        if (seen.count(c)) continue;
        const double rho = reduced_cost(c, ds, duals, cfg.fairness);
        if (rho < -ccfg.tol) cols.push_back({c, rho});
      }
      rank_columns(cols, ccfg.max_columns);
      rec.source = "cache";
    }
    if (cols.empty() && ccfg.greedy) {
      cols = solve_pricing_greedy(ds, duals, cfg.fairness, pcfg);
      rec.source = "greedy";
    }
    if (cols.empty()) {
      std::vector<int> keep;
      for (std::size_t k = 0; k < model.pool.size(); ++k)
        if (sol.primal[model.w_var[k]] > 1e-9)
          keep.insert(keep.end(), model.pool[k].literals.begin(), model.pool[k].literals.end());
      PricingStats st;
      cols = solve_pricing_exact(ds, duals, cfg.fairness, pcfg, keep, &st);
      rec.source = "exact";
      if (cols.empty()) {
        if (st.certified())
          finish(Termination::priced_out);
        else if (st.subsampled && st.status != mip::MIPStatus::feasible_timeout &&
                 st.status != mip::MIPStatus::timeout_no_incumbent)
          finish(Termination::sample_exhausted);
        else
          finish(Termination::time_limit);
        break;
      }
    }
    rec.best_rho = cols.front().reduced_cost;
    rec.pricing_seconds = since(pricing_start);

    std::vector<Clause> fresh;
    for (const auto& c : cols)
      if (fresh.size() < ccfg.max_columns && seen.insert(c.clause).second) fresh.push_back(c.clause);
    if (fresh.empty()) {
      trace.diagnostic = fmt::format(
          "cycling: pricing returned {} column(s) already in the pool (best reduced cost {:.6g}) "
          "at iteration {}; the master duals do not price existing columns correctly",
          cols.size(), rec.best_rho, it);
      spdlog::error("{}", trace.diagnostic);
      finish(Termination::cycling);
      break;
    }
    for (const auto& c : fresh) {
      model.add_clause(c, ds);
      out.pool.push_back(c);
      basis.structural.push_back(lp::VarStatus::at_lower);
    }
    rec.columns_added = fresh.size();
    rec.elapsed = since(start);
    trace.records.push_back(rec);
  }
  trace.seconds = since(start);
  spdlog::debug("colgen: {} iterations, pool {}, objective {:.6g}, {}", trace.records.size(),
                out.pool.size(), out.objective, to_string(trace.reason));
  return out;
}

namespace {

// Largest pairwise difference of weighted false-negative rates, over groups
// that have positives.
double training_fnr_gap(const RuleSet& rs, const BinaryDataset& ds) {
  const Bitset cov = coverage(rs, ds);
  std::vector<double> fn(ds.num_groups(), 0.0);
  for (std::size_t i : ds.positives())
    if (!cov.test(i)) fn[ds.group(i)] += ds.weight(i);
  double lo = lp::kInf, hi = -lp::kInf;
  for (std::size_t g = 0; g < ds.num_groups(); ++g) {
    const double pw = ds.positive_weight(static_cast<int>(g));
    if (pw <= 0) continue;
    lo = std::min(lo, fn[g] / pw);
    hi = std::max(hi, fn[g] / pw);
  }
  return hi > lo ? hi - lo : 0.0;
}

}  // namespace

TrainResult solve_master_ip(const BinaryDataset& ds, const std::vector<Clause>& pool,
                            const MasterConfig& cfg, const ColGenConfig& ccfg) {
  cfg.validate();
  TrainResult out;
  out.pool = pool;
  if (pool.empty()) {
    // Nothing to select: the empty rule set is the only candidate.
    out.candidates = {RuleSet{}};
    out.rules = RuleSet{};
    out.mip.status = mip::MIPStatus::optimal;
    out.mip.objective = cfg.objective == MasterObjective::hamming
                            ? hamming_loss(out.rules, ds)
                            : zero_one_errors(out.rules, ds);
    out.mip.bound = out.mip.objective;
    return out;
  }
  const MasterModel model = build_master(pool, ds, cfg);
  mip::MIPOptions opt;
  opt.time_limit = ccfg.mip_time_limit;
  opt.tol = ccfg.tol;
  opt.heuristic = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    return complete_from_relaxation(model, x);
  };
  out.mip = mip::solve_mip(model.integer_program(), opt);
  spdlog::debug("master IP: {} columns, {} nodes, {} fixings, {} incumbents, {:.2f} s", pool.size(),
                out.mip.nodes, out.mip.fixed, out.mip.pool.size(), out.mip.seconds);
  if (out.mip.status == mip::MIPStatus::infeasible)
    throw InfeasibleError(infeasibility_message(cfg));
  if (out.mip.status == mip::MIPStatus::timeout_no_incumbent)
    throw ResourceError(
        fmt::format("master IP found no incumbent within {} s", ccfg.mip_time_limit));
  out.candidates = decode(model, out.mip);
  out.rules = select_best_01(out.candidates, ds);
  if (cfg.fairness.active()) {
    const double gap = training_fnr_gap(out.rules, ds);
    if (gap > cfg.fairness.epsilon1 + 1e-9)
      throw SolverError(fmt::format("selected rule set has training FNR gap {} > epsilon {}", gap,
                                    cfg.fairness.epsilon1));
  }
  return out;
}

TrainResult train(const BinaryDataset& ds, const BinFeatureMap& map, const MasterConfig& cfg,
                  const ColGenConfig& ccfg, std::uint64_t seed) {
  cfg.validate();
  ccfg.validate();
  const BinaryDataset cds = ds.compress();
  std::vector<Clause> warm;
  double mining = 0;
  if (ccfg.warm_start) {
    if (map.p() != ds.p())
      throw ContractViolation("train: feature map does not match the dataset");
    const auto t0 = Clock::now();
    warm = mine_rules(cds, map, ccfg.mine_grid, ccfg.pricing(cfg.C, seed).D, seed);
    mining = since(t0);
  }
  spdlog::debug("train: {} rows compressed to {}, {} warm-start clauses", ds.n(), cds.n(),
                warm.size());
  ColGenResult cg = run_colgen(cds, cfg, ccfg, warm, seed);
  TrainResult out = solve_master_ip(cds, cg.pool, cfg, ccfg);
  out.trace = std::move(cg.trace);
  out.trace.mining_seconds = mining;
  return out;
}

}  // namespace fairdnf
