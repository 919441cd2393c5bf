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

#include "fairdnf/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {

// ---------------------------------------------------------------------------
// Duals
// ---------------------------------------------------------------------------

DualSolution DualSolution::from_lp(const MasterModel& model, const lp::LPSolution& sol) {
  if (sol.status != lp::LPStatus::optimal)
    throw ContractViolation("DualSolution::from_lp: relaxation is not optimal");
  const auto& ds = model.dataset();
  const std::size_t n = ds.n();
  DualSolution d;
  d.metric = model.config.fairness.metric;
  d.mu.assign(n, 0.0);
  d.alpha.assign(n, 0.0);
  d.negative_cost.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.label(i) == 1) {
      d.mu[i] = sol.duals[model.cover_row[i]];
      if (model.exact_row[i] >= 0) d.alpha[i] = -sol.duals[model.exact_row[i]];
    } else if (model.objective == MasterObjective::hamming) {
      d.negative_cost[i] = ds.weight(i);
    } else {
      d.negative_cost[i] = -sol.duals[model.negative_row[i]];
    }
  }
  d.lambda = -sol.duals[model.complexity_row];
  for (const auto& fr : model.fairness_rows)
    d.gamma.push_back({fr.g, fr.h, fr.kind, -sol.duals[fr.row]});
  return d;
}

DualSolution DualSolution::zero(const BinaryDataset& ds, FairnessMetric metric) {
  DualSolution d;
  d.metric = metric;
  d.mu.assign(ds.n(), 0.0);
  d.alpha.assign(ds.n(), 0.0);
  d.negative_cost.assign(ds.n(), 0.0);
  for (auto i : ds.negatives()) d.negative_cost[i] = ds.weight(i);
  return d;
}

std::vector<double> DualSolution::row_coefficients(const BinaryDataset& ds) const {
  const std::size_t n = ds.n();
  if (mu.size() != n || alpha.size() != n || negative_cost.size() != n)
    throw ContractViolation("dual vectors do not match the dataset");
  std::vector<double> coef(n);
  for (std::size_t i = 0; i < n; ++i)
    coef[i] = ds.label(i) == 1 ? 2.0 * alpha[i] - mu[i] : negative_cost[i];
  for (const auto& gm : gamma) {
    if (gm.kind != RateKind::fpr || gm.value == 0.0) continue;
    const double ng = ds.negative_weight(gm.g), nh = ds.negative_weight(gm.h);
    for (auto i : ds.negatives_in(gm.g)) coef[i] += gm.value * ds.weight(i) / ng;
    for (auto i : ds.negatives_in(gm.h)) coef[i] -= gm.value * ds.weight(i) / nh;
  }
  return coef;
}

DualSolution DualSolution::restrict_rows(std::span<const std::size_t> rows) const {
  DualSolution d;
  d.metric = metric;
  d.lambda = lambda;
  d.gamma = gamma;
  for (auto r : rows) {
    d.mu.push_back(mu[r]);
    d.alpha.push_back(alpha[r]);
    d.negative_cost.push_back(negative_cost[r]);
  }
  return d;
}

PricingConfig PricingConfig::for_complexity(double C) {
  PricingConfig cfg;
  cfg.D = std::max(1, static_cast<int>(std::floor(C + 1e-9)) - 1);
  return cfg;
}

void PricingConfig::validate() const {
  if (D < 1) throw ConfigError("pricing: D must be at least 1");
  if (!(time_limit > 0)) throw ConfigError("pricing: time limit must be positive");
  if (max_columns == 0 || max_rows == 0 || max_nonzeros == 0)
    throw ConfigError("pricing: limits must be positive");
  if (!(tol > 0)) throw ConfigError("pricing: tol must be positive");
}

namespace {

void check_metric(const DualSolution& duals, const FairnessSpec& fairness) {
  if (fairness.metric == FairnessMetric::equalized_odds &&
      duals.metric != FairnessMetric::equalized_odds)
    throw ContractViolation("equalized-odds pricing needs the false-positive-rate duals");
}

double sum_over(const Bitset& cov, const std::vector<double>& coef) {
  double s = 0;
  cov.for_each_set([&](std::size_t i) { s += coef[i]; });
  return s;
}

}  // namespace

double reduced_cost(const Clause& clause, const BinaryDataset& ds, const DualSolution& duals,
                    const FairnessSpec& fairness) {
  check_metric(duals, fairness);
  const auto coef = duals.row_coefficients(ds);
  return sum_over(coverage(clause, ds), coef) + duals.lambda * clause.complexity();
}

void rank_columns(std::vector<PricedColumn>& cols, std::size_t limit) {
  std::sort(cols.begin(), cols.end(), [](const PricedColumn& a, const PricedColumn& b) {
    if (a.reduced_cost != b.reduced_cost) return a.reduced_cost < b.reduced_cost;
    return a.clause < b.clause;
  });
  std::set<Clause> seen;
  std::vector<PricedColumn> out;
  for (auto& c : cols) {
    if (out.size() >= limit) break;
    if (seen.insert(c.clause).second) out.push_back(std::move(c));
  }
  cols = std::move(out);
}

// ---------------------------------------------------------------------------
// Pricing integer program
// ---------------------------------------------------------------------------

Clause PricingModel::decode(const std::vector<double>& x) const {
  std::vector<int> lits;
  for (std::size_t j = 0; j < z_var.size(); ++j)
    if (z_var[j] >= 0 && x[z_var[j]] > 0.5) lits.push_back(static_cast<int>(j));
  if (lits.empty()) return Clause{};
  return Clause(std::move(lits));
}

std::vector<double> PricingModel::complete(const std::vector<double>& x,
                                           const BinaryDataset& ds) const {
  std::vector<double> out(x.size(), 0.0);
  Bitset cov(ds.n(), true);
  bool any = false;
  for (std::size_t j = 0; j < z_var.size(); ++j) {
    if (z_var[j] < 0 || x[z_var[j]] <= 0.5) continue;
    out[z_var[j]] = 1.0;
    cov &= ds.column(j);
    any = true;
  }
  if (!any) return x;
  for (std::size_t i = 0; i < ds.n(); ++i)
    if (delta_var[i] >= 0) out[delta_var[i]] = cov.test(i) ? 1.0 : 0.0;
  return out;
}

PricingModel build_pricing(const BinaryDataset& ds, const DualSolution& duals,
                           const FairnessSpec& fairness, const PricingConfig& cfg) {
  cfg.validate();
  check_metric(duals, fairness);
  PricingModel m;
  m.coef = duals.row_coefficients(ds);
  const double lambda = duals.lambda;
  auto& lp = m.ip.lp;

  // Identical feature columns price identically; keep the first of each.
  m.representative.assign(ds.p(), -1);
  m.z_var.assign(ds.p(), -1);
  std::map<std::vector<std::uint64_t>, int> first;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    auto [it, inserted] = first.emplace(ds.column(j).words(), static_cast<int>(j));
    m.representative[j] = it->second;
    if (!inserted) continue;
    m.z_var[j] = lp.add_variable(lambda, 0.0, 1.0, fmt::format("z{}", j));
    m.ip.mark_integer(m.z_var[j], 1);
  }
  lp.set_objective_offset(lambda);

  m.delta_var.assign(ds.n(), -1);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (std::abs(m.coef[i]) <= 1e-12) continue;
    m.delta_var[i] = lp.add_variable(m.coef[i], 0.0, 1.0, fmt::format("d{}", i));
    m.ip.mark_integer(m.delta_var[i], 0);
  }
  const double D = cfg.D;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const int d = m.delta_var[i];
    if (d < 0) continue;
    std::vector<lp::Term> terms;
    for (int j : ds.zero_set(i))
      if (m.z_var[j] >= 0) terms.push_back({m.z_var[j], 1.0});
    if (m.coef[i] < 0) {
      terms.push_back({d, D});
      lp.add_row(std::move(terms), lp::Relation::le, D, fmt::format("neg{}", i));
    } else {
      terms.push_back({d, 1.0});
      lp.add_row(std::move(terms), lp::Relation::ge, 1.0, fmt::format("pos{}", i));
    }
  }
  std::vector<lp::Term> all;
  for (int v : m.z_var)
    if (v >= 0) all.push_back({v, 1.0});
  lp.add_row(all, lp::Relation::le, D, "max_literals");
  lp.add_row(all, lp::Relation::ge, 1.0, "min_literals");
  return m;
}

std::vector<PricedColumn> solve_pricing_exact(const BinaryDataset& ds, const DualSolution& duals,
                                              const FairnessSpec& fairness,
                                              const PricingConfig& cfg,
                                              const std::vector<int>& keep_features,
                                              PricingStats* stats) {
  cfg.validate();
  check_metric(duals, fairness);
  const Subsample sub = subsample(ds, cfg, cfg.seed, keep_features);
  const DualSolution sub_duals = sub.identity ? duals : duals.restrict_rows(sub.rows);
  const PricingModel model = build_pricing(sub.ds, sub_duals, fairness, cfg);

  mip::MIPOptions opt;
  opt.time_limit = cfg.time_limit;
  opt.tol = cfg.tol;
  opt.cutoff = -cfg.tol;
  opt.collect_all = true;
  opt.heuristic = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    return model.complete(x, sub.ds);
  };
  const mip::MIPResult res = mip::solve_mip(model.ip, opt);
  if (stats) {
    stats->subsampled = !sub.identity;
    stats->status = res.status;
    stats->nodes = res.nodes;
    stats->seconds = res.seconds;
  }

  const auto coef = duals.row_coefficients(ds);
  std::vector<PricedColumn> out;
  std::set<Clause> seen;
  auto consider = [&](const std::vector<double>& x) {
    Clause local = model.decode(x);
    if (local.literals.empty()) return;
    Clause c = sub.lift(local);
    if (static_cast<int>(c.literals.size()) > cfg.D || !seen.insert(c).second) return;
    const double rho = sum_over(coverage(c, ds), coef) + duals.lambda * c.complexity();
    if (rho < -cfg.tol) out.push_back({std::move(c), rho});
  };
  for (const auto& s : res.all_solutions) consider(s.x);
  for (const auto& s : res.pool) consider(s.x);
  rank_columns(out, cfg.max_columns);
  return out;
}

// ---------------------------------------------------------------------------
// Greedy pricing
// ---------------------------------------------------------------------------

std::vector<PricedColumn> solve_pricing_greedy(const BinaryDataset& ds, const DualSolution& duals,
                                               const FairnessSpec& fairness,
                                               const PricingConfig& cfg) {
  cfg.validate();
  check_metric(duals, fairness);
  const auto coef = duals.row_coefficients(ds);
  const double lambda = duals.lambda;
  const std::size_t p = ds.p();
  std::vector<PricedColumn> found;
  std::set<std::vector<int>> visited;

  auto evaluate = [&](const Bitset& cov, std::size_t lits) {
    return sum_over(cov, coef) + lambda * static_cast<double>(1 + lits);
  };

  // Singletons, ranked.
  std::vector<std::pair<double, int>> singles;
  for (std::size_t j = 0; j < p; ++j) {
    const double rho = evaluate(ds.column(j), 1);
    singles.push_back({rho, static_cast<int>(j)});
    if (rho < -cfg.tol) found.push_back({Clause({static_cast<int>(j)}), rho});
  }
  std::sort(singles.begin(), singles.end());

  SplitMix64 rng(cfg.seed ^ 0x5eedULL);
  const std::size_t starts = std::min<std::size_t>(p, static_cast<std::size_t>(cfg.greedy_restarts));
  const std::size_t pool_top = std::min<std::size_t>(p, 4 * starts + 1);
  for (std::size_t r = 0; r < starts; ++r) {
    // First restart from the best singleton, later ones from random top picks.
    const int start = r == 0 ? singles[0].second : singles[rng.below(pool_top)].second;
    std::vector<int> lits = {start};
    if (!visited.insert(lits).second) continue;
    Bitset cov = ds.column(static_cast<std::size_t>(start));
    double rho = evaluate(cov, 1);
    while (static_cast<int>(lits.size()) < cfg.D) {
      double best = rho;
      int best_j = -1;
      for (std::size_t j = 0; j < p; ++j) {
        if (std::find(lits.begin(), lits.end(), static_cast<int>(j)) != lits.end()) continue;
        const double cand = evaluate(cov & ds.column(j), lits.size() + 1);
        if (cand < -cfg.tol) {
          std::vector<int> key = lits;
          key.push_back(static_cast<int>(j));
          std::sort(key.begin(), key.end());
          if (visited.insert(key).second) found.push_back({Clause(key), cand});
        }
        if (cand < best - 1e-12) {
          best = cand;
          best_j = static_cast<int>(j);
        }
      }
      if (best_j < 0) break;
      lits.push_back(best_j);
      cov &= ds.column(static_cast<std::size_t>(best_j));
      rho = best;
    }
  }
  rank_columns(found, cfg.max_columns);
  return found;
}

// ---------------------------------------------------------------------------
// Subsampling
// ---------------------------------------------------------------------------

Clause Subsample::lift(const Clause& c) const {
  if (identity) return c;
  std::vector<int> lits;
  for (int j : c.literals) lits.push_back(static_cast<int>(features.at(static_cast<std::size_t>(j))));
  return Clause(std::move(lits));
}

Subsample subsample(const BinaryDataset& ds, const PricingConfig& cfg, std::uint64_t seed,
                    const std::vector<int>& keep_features) {
  Subsample out;
  if (ds.n() <= cfg.max_rows && ds.zero_count() <= cfg.max_nonzeros) {
    out.ds = ds;
    out.rows.resize(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) out.rows[i] = i;
    out.features.resize(ds.p());
    for (std::size_t j = 0; j < ds.p(); ++j) out.features[j] = j;
    out.identity = true;
    return out;
  }
  out.identity = false;
  SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);

  // Rows: proportional allocation over (label, group) strata.
  std::vector<std::size_t> rows;
  if (ds.n() <= cfg.max_rows) {
    rows.resize(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) rows[i] = i;
  } else {
    std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < ds.n(); ++i) strata[{ds.label(i), ds.group(i)}].push_back(i);
    for (auto& [key, members] : strata) {
      rng.shuffle(members);
      const double share = static_cast<double>(members.size()) * static_cast<double>(cfg.max_rows) /
                           static_cast<double>(ds.n());
      const std::size_t take =
          std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(share)), 1, members.size());
      rows.insert(rows.end(), members.begin(), members.begin() + static_cast<long>(take));
    }
    std::sort(rows.begin(), rows.end());
  }

  // Features: required ones first, then a uniform draw within the budget.
  std::vector<std::size_t> zeros(ds.p(), 0);
  for (auto i : rows)
    for (int j : ds.zero_set(i)) ++zeros[static_cast<std::size_t>(j)];
  std::vector<char> chosen(ds.p(), 0);
  std::size_t nnz = 0;
  for (int j : keep_features) {
    if (j < 0 || static_cast<std::size_t>(j) >= ds.p() || chosen[j]) continue;
    chosen[j] = 1;
    nnz += zeros[j];
  }
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (!chosen[j]) order.push_back(j);
  rng.shuffle(order);
  for (auto j : order) {
    if (nnz + zeros[j] > cfg.max_nonzeros) continue;
    chosen[j] = 1;
    nnz += zeros[j];
  }
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (chosen[j]) out.features.push_back(j);
  out.rows = rows;
  out.ds = ds.subset(rows).select_features(out.features);
  return out;
}

}  // namespace fairdnf
