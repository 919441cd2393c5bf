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

#include "fairdnf/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fairdnf/errors.hpp"

namespace fairdnf::io {

namespace {

Json optional_rate(const std::optional<double>& r) { return r ? Json(*r) : Json(nullptr); }

Json summary(const Summary& s) { return Json{{"mean", s.mean}, {"std", s.stddev}}; }

}  // namespace

Json to_json(const BinFeatureMap& map) {
  Json features = Json::array();
  for (std::size_t j = 0; j < map.p(); ++j) {
    const auto& f = map.entries[j];
    Json e{{"index", j}, {"source", f.source}, {"op", std::string(to_string(f.op))}};
    if (f.op == FeatureOp::le || f.op == FeatureOp::gt)
      e["threshold"] = f.threshold;
    else
      e["category"] = f.category;
    e["complement"] = f.complement;
    e["text"] = map.describe(j);
    features.push_back(std::move(e));
  }
  return Json{{"features", std::move(features)}};
}

BinFeatureMap feature_map_from_json(const Json& j) {
  BinFeatureMap map;
  try {
    for (const auto& e : j.at("features")) {
      BinFeature f;
      f.source = e.at("source").get<std::string>();
      f.op = feature_op_from_string(e.at("op").get<std::string>());
      if (e.contains("threshold")) f.threshold = e.at("threshold").get<double>();
      if (e.contains("category")) f.category = e.at("category").get<std::string>();
      f.complement = e.value("complement", -1);
      map.entries.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed feature map: {}", e.what()));
  }
  for (const auto& f : map.entries)
    if (f.complement >= static_cast<int>(map.p()))
      throw DataError("malformed feature map: complement index out of range");
  return map;
}

Json to_json(const RuleSet& rs, const BinFeatureMap& map) {
  Json clauses = Json::array();
  for (std::size_t k = 0; k < rs.clauses.size(); ++k) {
    const auto& c = rs.clauses[k];
    clauses.push_back(Json{{"literals", c.literals},
                           {"multiplicity", k < rs.multiplicity.size() ? rs.multiplicity[k] : 1},
                           {"text", to_string(c, map)}});
  }
  return Json{{"clauses", std::move(clauses)},
              {"complexity", rs.total_complexity()},
              {"dnf", to_dnf(rs, map)},
              {"feature_map", to_json(map)}};
}

RuleSet rule_set_from_json(const Json& j, BinFeatureMap* map) {
  RuleSet rs;
  try {
    for (const auto& c : j.at("clauses"))
      rs.add(Clause(c.at("literals").get<std::vector<int>>()), c.value("multiplicity", 1));
    if (map) *map = feature_map_from_json(j.at("feature_map"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed rule set: {}", e.what()));
  } catch (const ContractViolation& e) {
    throw DataError(fmt::format("malformed rule set: {}", e.what()));
  }
  if (map)
    for (const auto& c : rs.clauses)
      for (int lit : c.literals)
        if (static_cast<std::size_t>(lit) >= map->p())
          throw DataError("rule set literal outside its feature map");
  return rs;
}

Json to_json(const MetricsReport& m) {
  Json groups = Json::array();
  for (const auto& g : m.groups)
    groups.push_back(Json{{"name", g.name},
                          {"positives", g.positives},
                          {"negatives", g.negatives},
                          {"fnr", optional_rate(g.fnr)},
                          {"fpr", optional_rate(g.fpr)}});
  return Json{{"rows", m.rows},
              {"accuracy", m.accuracy},
              {"errors", m.errors},
              {"hamming_loss", m.hamming_loss},
              {"complexity", m.complexity},
              {"clauses", m.clauses},
              {"groups", std::move(groups)},
              {"fnr_gap", m.fnr_gap},
              {"fpr_gap", m.fpr_gap},
              {"eq_opp_gap", m.eq_opp_gap},
              {"eq_odds_gap", m.eq_odds_gap}};
}

Json to_json(const ColGenTrace& t) {
  Json records = Json::array();
  for (const auto& r : t.records)
    records.push_back(Json{{"iteration", r.iteration},
                           {"objective", r.objective},
                           {"best_rho", r.best_rho},
                           {"columns_added", r.columns_added},
                           {"elapsed_s", r.elapsed},
                           {"source", r.source},
                           {"lp_s", r.lp_seconds},
                           {"pricing_s", r.pricing_seconds}});
  return Json{{"termination", std::string(to_string(t.reason))},
              {"diagnostic", t.diagnostic},
              {"seconds", t.seconds},
              {"mining_seconds", t.mining_seconds},
              {"iterations", std::move(records)}};
}

Json to_json(const FrontierPoint& p) {
  return Json{{"metric", std::string(to_string(p.metric))},
              {"epsilon", p.epsilon},
              {"C", p.C},
              {"folds", p.folds},
              {"test_accuracy", summary(p.test_accuracy)},
              {"train_accuracy", summary(p.train_accuracy)},
              {"test_gap", summary(p.test_gap)},
              {"train_gap", summary(p.train_gap)},
              {"complexity_mean", p.complexity},
              {"dominated", p.dominated}};
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::string out =
      "metric,epsilon,C,folds,test_acc_mean,test_acc_std,train_acc_mean,train_acc_std,"
      "test_gap_mean,test_gap_std,train_gap_mean,train_gap_std,complexity_mean,dominated\n";
  for (const auto& p : points)
    out += fmt::format("{},{:g},{:g},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.3f},{}\n",
                       to_string(p.metric), p.epsilon, p.C, p.folds, p.test_accuracy.mean,
                       p.test_accuracy.stddev, p.train_accuracy.mean, p.train_accuracy.stddev,
                       p.test_gap.mean, p.test_gap.stddev, p.train_gap.mean, p.train_gap.stddev,
                       p.complexity, p.dominated ? 1 : 0);
  return out;
}

std::string cells_csv(const std::vector<CellResult>& cells) {
  std::string out =
      "metric,epsilon,C,fold,ok,train_acc,test_acc,train_gap,test_gap,complexity\n";
  for (const auto& c : cells) {
    const auto& mc = c.cell.master;
    const FairnessMetric m = mc.fairness.metric;
    for (const auto& f : c.folds)
      out += fmt::format("{},{:g},{:g},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", to_string(m),
                         mc.fairness.epsilon1, mc.C, f.fold, f.ok ? 1 : 0, f.train.accuracy,
                         f.test.accuracy, f.train.gap(m), f.test.gap(m), f.test.complexity);
  }
  return out;
}

std::string binary_matrix_csv(const BinaryDataset& ds) {
  std::string out;
  for (std::size_t j = 0; j < ds.p(); ++j) out += fmt::format("f{},", j);
  out += "label,group\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.p(); ++j) {
      out += ds.x(i, j) ? '1' : '0';
      out += ',';
    }
    out += fmt::format("{},{}\n", ds.label(i), ds.group_names()[ds.group(i)]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw DataError(fmt::format("failed writing '{}'", path));
}

}  // namespace fairdnf::io
