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

#include "fairdnf/master.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

Clause::Clause(std::vector<int> lits) : literals(std::move(lits)) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  if (literals.empty()) throw ContractViolation("a clause needs at least one literal");
  if (literals.front() < 0) throw ContractViolation("negative literal index");
}

void RuleSet::add(Clause c, int mult) {
  if (mult < 1) throw ContractViolation("multiplicity must be at least 1");
  clauses.push_back(std::move(c));
  multiplicity.push_back(mult);
}

int RuleSet::total_complexity() const {
  int total = 0;
  for (std::size_t k = 0; k < clauses.size(); ++k) total += clauses[k].complexity() * multiplicity[k];
  return total;
}

Bitset coverage(const Clause& clause, const BinaryDataset& ds) {
  Bitset out(ds.n(), true);
  for (int j : clause.literals) {
    if (static_cast<std::size_t>(j) >= ds.p())
      throw ContractViolation(fmt::format("literal {} out of range (p = {})", j, ds.p()));
    out &= ds.column(static_cast<std::size_t>(j));
  }
  return out;
}

Bitset coverage(const RuleSet& rs, const BinaryDataset& ds) {
  Bitset out(ds.n());
  for (const auto& c : rs.clauses) out |= coverage(c, ds);
  return out;
}

std::string to_string(const Clause& c, const BinFeatureMap& map) {
  std::string out;
  for (std::size_t k = 0; k < c.literals.size(); ++k) {
    if (k > 0) out += " and ";
    const auto j = static_cast<std::size_t>(c.literals[k]);
    out += "(" + (j < map.p() ? map.describe(j) : fmt::format("x{}", j)) + ")";
  }
  return out;
}

std::string to_dnf(const RuleSet& rs, const BinFeatureMap& map) {
  if (rs.empty()) return "FALSE";
  std::string out;
  for (std::size_t k = 0; k < rs.clauses.size(); ++k) {
    if (k > 0) out += " OR\n";
    out += to_string(rs.clauses[k], map);
    if (rs.multiplicity[k] > 1) out += fmt::format(" [x{}]", rs.multiplicity[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

std::string_view to_string(FairnessMetric m) {
  switch (m) {
    case FairnessMetric::none: return "none";
    case FairnessMetric::equal_opportunity: return "equal_opportunity";
    case FairnessMetric::equalized_odds: return "equalized_odds";
  }
  return "?";
}

FairnessMetric fairness_metric_from_string(std::string_view s) {
  if (s == "none") return FairnessMetric::none;
  if (s == "equal_opportunity" || s == "equal-opportunity" || s == "eo")
    return FairnessMetric::equal_opportunity;
  if (s == "equalized_odds" || s == "equalized-odds" || s == "eodds")
    return FairnessMetric::equalized_odds;
  throw ConfigError(fmt::format("unknown fairness metric '{}'", s));
}

std::string_view to_string(MasterObjective o) {
  return o == MasterObjective::hamming ? "hamming" : "zero_one";
}

MasterObjective master_objective_from_string(std::string_view s) {
  if (s == "hamming") return MasterObjective::hamming;
  if (s == "zero_one" || s == "zero-one" || s == "01") return MasterObjective::zero_one;
  throw ConfigError(fmt::format("unknown master objective '{}'", s));
}

void FairnessSpec::validate() const {
  if (!(epsilon1 >= 0) || !std::isfinite(epsilon1))
    throw ConfigError("fairness epsilon1 must be a nonnegative number");
  if (epsilon2 && (!(*epsilon2 >= 0) || !std::isfinite(*epsilon2)))
    throw ConfigError("fairness epsilon2 must be a nonnegative number");
}

void MasterConfig::validate() const {
  if (!(C >= 2) || !std::isfinite(C)) throw ConfigError("complexity bound C must be at least 2");
  fairness.validate();
  if (objective == MasterObjective::zero_one &&
      fairness.metric == FairnessMetric::equalized_odds)
    throw ConfigError("the 0-1 master supports equal opportunity only");
}

// ---------------------------------------------------------------------------
// Master model
// ---------------------------------------------------------------------------

int MasterModel::add_clause(const Clause& clause, const BinaryDataset& ds) {
  if (clause.literals.empty()) throw ContractViolation("empty clause in master pool");
  if (clause.complexity() > config.C + 1e-9)
    throw ContractViolation(fmt::format("clause complexity {} exceeds C = {}",
                                        clause.complexity(), config.C));
  Bitset cov = coverage(clause, ds);
  const bool hamming = objective == MasterObjective::hamming;
  double cost = 0;
  std::vector<std::pair<int, double>> entries;
  std::vector<double> neg_cov(ds.num_groups(), 0.0);
  cov.for_each_set([&](std::size_t i) {
    if (ds.label(i) == 1) {
      entries.push_back({cover_row[i], 1.0});
      if (exact_row[i] >= 0) entries.push_back({exact_row[i], 2.0});
    } else {
      neg_cov[ds.group(i)] += ds.weight(i);
      if (hamming)
        cost += ds.weight(i);
      else
        entries.push_back({negative_row[i], 1.0});
    }
  });
  entries.push_back({complexity_row, static_cast<double>(clause.complexity())});
  for (const auto& fr : fairness_rows) {
    if (fr.kind != RateKind::fpr) continue;
    const double a = neg_cov[fr.g] / ds.negative_weight(fr.g) -
                     neg_cov[fr.h] / ds.negative_weight(fr.h);
    if (a != 0.0) entries.push_back({fr.row, a});
  }
  const double upper = config.unit_upper_bound ? 1.0 : lp::kInf;
  const int var = lp.add_column(cost, entries, 0.0, upper,
                                fmt::format("w{}", pool.size()));
  pool.push_back(clause);
  cover.push_back(std::move(cov));
  w_var.push_back(var);
  return static_cast<int>(pool.size()) - 1;
}

mip::IntegerProgram MasterModel::integer_program() const {
  mip::IntegerProgram ip;
  ip.lp = lp;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    // Trivial bound tightening from the complexity row; IP only.
    double ub = std::floor(config.C / pool[k].complexity() + 1e-9);
    if (objective == MasterObjective::zero_one || config.unit_upper_bound) ub = std::min(ub, 1.0);
    ip.lp.set_bounds(w_var[k], 0.0, ub);
    ip.mark_integer(w_var[k], 1);
  }
  for (int v : zeta_var) {
    if (v < 0) continue;
    ip.lp.set_bounds(v, 0.0, 1.0);
    ip.mark_integer(v, 0);
  }
  return ip;
}

MasterModel build_master(const std::vector<Clause>& pool, const BinaryDataset& ds,
                         const MasterConfig& cfg, bool allow_empty_pool) {
  cfg.validate();
  if (pool.empty() && !allow_empty_pool) throw ConfigError("master pool is empty");
  if (ds.n() == 0) throw DataError("master: empty dataset");
  MasterModel m;
  m.objective = cfg.objective;
  m.config = cfg;
  m.ds_ = &ds;
  const std::size_t n = ds.n();
  const bool hamming = cfg.objective == MasterObjective::hamming;
  const double C = cfg.C;
  m.zeta_var.assign(n, -1);
  m.cover_row.assign(n, -1);
  m.exact_row.assign(n, -1);
  m.negative_row.assign(n, -1);

  for (std::size_t i = 0; i < n; ++i) {
    if (ds.label(i) == 1 || !hamming)
      m.zeta_var[i] = m.lp.add_variable(ds.weight(i), 0.0, lp::kInf, fmt::format("zeta{}", i));
  }
  const bool exact_positive = hamming || cfg.fairness.active();
  for (std::size_t i = 0; i < n; ++i) {
    const int z = m.zeta_var[i];
    if (ds.label(i) == 1) {
      m.cover_row[i] = m.lp.add_row({{z, 1.0}}, lp::Relation::ge, 1.0, fmt::format("cover{}", i));
      if (exact_positive)
        m.exact_row[i] = m.lp.add_row({{z, C}}, lp::Relation::le, C, fmt::format("exact{}", i));
    } else if (!hamming) {
      m.negative_row[i] =
          m.lp.add_row({{z, -C / 2}}, lp::Relation::le, 0.0, fmt::format("fp{}", i));
    }
  }
  m.complexity_row = m.lp.add_row({}, lp::Relation::le, C, "complexity");

  const auto& fs = cfg.fairness;
  if (fs.active()) {
    const int G = static_cast<int>(ds.num_groups());
    for (int g = 0; g < G; ++g) {
      for (int h = 0; h < G; ++h) {
        if (g == h) continue;
        const auto& names = ds.group_names();
        if (ds.positive_weight(g) <= 0 || ds.positive_weight(h) <= 0) {
          spdlog::warn("group pair ({}, {}) has no positives; equal-opportunity row omitted",
                       names[g], names[h]);
        } else {
          std::vector<lp::Term> terms;
          for (auto i : ds.positives_in(g))
            terms.push_back({m.zeta_var[i], ds.weight(i) / ds.positive_weight(g)});
          for (auto i : ds.positives_in(h))
            terms.push_back({m.zeta_var[i], -ds.weight(i) / ds.positive_weight(h)});
          const int r = m.lp.add_row(std::move(terms), lp::Relation::le, fs.epsilon1,
                                     fmt::format("fnr_{}_{}", g, h));
          m.fairness_rows.push_back({r, g, h, RateKind::fnr});
        }
        if (fs.metric != FairnessMetric::equalized_odds) continue;
        if (ds.negative_weight(g) <= 0 || ds.negative_weight(h) <= 0) {
          spdlog::warn("group pair ({}, {}) has no negatives; equalized-odds row omitted",
                       names[g], names[h]);
          continue;
        }
        const int r = m.lp.add_row({}, lp::Relation::le, fs.eps2(),
                                   fmt::format("fpr_{}_{}", g, h));
        m.fairness_rows.push_back({r, g, h, RateKind::fpr});
      }
    }
  }
  for (const auto& c : pool) m.add_clause(c, ds);
  return m;
}

MasterModel build_master_hamming(const std::vector<Clause>& pool, const BinaryDataset& ds,
                                 MasterConfig cfg) {
  cfg.objective = MasterObjective::hamming;
  return build_master(pool, ds, cfg);
}

MasterModel build_master_zero_one(const std::vector<Clause>& pool, const BinaryDataset& ds,
                                  MasterConfig cfg) {
  cfg.objective = MasterObjective::zero_one;
  return build_master(pool, ds, cfg);
}

std::vector<double> complete_from_relaxation(const MasterModel& model,
                                             const std::vector<double>& x) {
  const auto& ds = model.dataset();
  const std::size_t K = model.pool.size();
  std::vector<double> out(x.size(), 0.0);
  std::vector<int> w(K, 0);
  double used = 0;
  for (std::size_t k = 0; k < K; ++k) {
    double v = std::floor(x[model.w_var[k]] + 0.5);
    if (model.objective == MasterObjective::zero_one || model.config.unit_upper_bound)
      v = std::min(v, 1.0);
    w[k] = static_cast<int>(std::max(0.0, v));
    used += w[k] * model.pool[k].complexity();
  }
  if (used > model.config.C) {
    // Drop the weakest selections until the budget holds.
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return x[model.w_var[a]] < x[model.w_var[b]];
    });
    for (std::size_t k : order) {
      while (w[k] > 0 && used > model.config.C) {
        --w[k];
        used -= model.pool[k].complexity();
      }
      if (used <= model.config.C) break;
    }
  }
  Bitset covered(ds.n());
  for (std::size_t k = 0; k < K; ++k) {
    out[model.w_var[k]] = w[k];
    if (w[k] > 0) covered |= model.cover[k];
  }
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const int z = model.zeta_var[i];
    if (z < 0) continue;
    const bool wrong = ds.label(i) == 1 ? !covered.test(i) : covered.test(i);
    out[z] = wrong ? 1.0 : 0.0;
  }
  return out;
}

RuleSet decode_point(const MasterModel& model, const std::vector<double>& x) {
  RuleSet rs;
  for (std::size_t k = 0; k < model.pool.size(); ++k) {
    const long long v = std::llround(x[model.w_var[k]]);
    if (v >= 1) rs.add(model.pool[k], static_cast<int>(v));
  }
  return rs;
}

std::vector<RuleSet> decode(const MasterModel& model, const mip::MIPResult& mip) {
  std::vector<RuleSet> out;
  for (const auto& sol : mip.pool) {
    out.push_back(decode_point(model, sol.x));
    const auto& m = out.back().multiplicity;
    if (std::any_of(m.begin(), m.end(), [](int v) { return v > 1; }))
      spdlog::info("master incumbent selects a clause more than once");
  }
  return out;
}

double zero_one_errors(const RuleSet& rs, const BinaryDataset& ds) {
  const Bitset cov = coverage(rs, ds);
  double err = 0;
  for (std::size_t i = 0; i < ds.n(); ++i)
    if ((ds.label(i) == 1) != cov.test(i)) err += ds.weight(i);
  return err;
}

double hamming_loss(const RuleSet& rs, const BinaryDataset& ds) {
  std::vector<double> hits(ds.n(), 0.0);
  Bitset any(ds.n());
  for (std::size_t k = 0; k < rs.clauses.size(); ++k) {
    const Bitset cov = coverage(rs.clauses[k], ds);
    cov.for_each_set([&](std::size_t i) { hits[i] += rs.multiplicity[k]; });
    any |= cov;
  }
  double loss = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (ds.label(i) == 1)
      loss += any.test(i) ? 0.0 : ds.weight(i);
    else
      loss += ds.weight(i) * hits[i];
  }
  return loss;
}

RuleSet select_best_01(const std::vector<RuleSet>& rulesets, const BinaryDataset& ds) {
  if (rulesets.empty()) throw ContractViolation("select_best_01: no candidate rule sets");
  std::size_t best = 0;
  double best_err = zero_one_errors(rulesets[0], ds);
  for (std::size_t k = 1; k < rulesets.size(); ++k) {
    const double err = zero_one_errors(rulesets[k], ds);
    if (err < best_err - 1e-9 ||
        (std::abs(err - best_err) <= 1e-9 &&
         rulesets[k].total_complexity() < rulesets[best].total_complexity())) {
      best = k;
      best_err = err;
    }
  }
  return rulesets[best];
}

}  // namespace fairdnf
