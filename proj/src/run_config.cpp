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

#include "fairdnf/run_config.hpp"

#include <filesystem>
#include <initializer_list>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "fairdnf/errors.hpp"
#include "fairdnf/io.hpp"

namespace fairdnf {

namespace {

using Json = nlohmann::json;

void allow_keys(const Json& obj, std::string_view where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{} must be an object", where));
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw ConfigError(fmt::format("unknown key '{}' in {}", k, where));
}

const Json& require(const Json& obj, const char* key, std::string_view where) {
  if (!obj.contains(key)) throw ConfigError(fmt::format("missing required field {}.{}", where, key));
  return obj.at(key);
}

template <class T>
void read(const Json& obj, const char* key, T& out, std::string_view where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("{}.{} has the wrong type", where, key));
  }
}

template <class T>
T get(const Json& v, std::string_view name) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("{} has the wrong type", name));
  }
}

void parse_data(const Json& d, DataConfig& out, const std::string& base_dir) {
  allow_keys(d, "data", {"path", "columns", "label", "positive_label", "group", "preprocess"});
  const auto path = get<std::string>(require(d, "path", "data"), "data.path");
  const std::filesystem::path p(path);
  out.path = p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
  out.label_column = get<std::string>(require(d, "label", "data"), "data.label");
  out.group_column = get<std::string>(require(d, "group", "data"), "data.group");
  read(d, "positive_label", out.positive_label, "data");
  read(d, "preprocess", out.preprocess, "data");
  for (const auto& c : require(d, "columns", "data")) {
    allow_keys(c, "data.columns[]", {"name", "kind"});
    ColumnSpec spec;
    spec.name = get<std::string>(require(c, "name", "data.columns[]"), "data.columns[].name");
    const auto kind = get<std::string>(require(c, "kind", "data.columns[]"), "data.columns[].kind");
    if (kind == "numeric")
      spec.kind = ColumnKind::numeric;
    else if (kind == "categorical")
      spec.kind = ColumnKind::categorical;
    else
      throw ConfigError(fmt::format("unknown column kind '{}'", kind));
    out.columns.push_back(std::move(spec));
  }
}

void parse_colgen(const Json& c, ColGenConfig& out) {
  allow_keys(c, "colgen",
             {"time_limit", "pricing_time_limit", "mip_time_limit", "max_columns", "max_rows",
              "max_nonzeros", "max_iterations", "greedy", "warm_start", "warm_pool_limit", "mine_depths",
              "mine_trees", "tol"});
  read(c, "time_limit", out.time_limit, "colgen");
  read(c, "pricing_time_limit", out.pricing_time_limit, "colgen");
  read(c, "mip_time_limit", out.mip_time_limit, "colgen");
  read(c, "max_columns", out.max_columns, "colgen");
  read(c, "max_rows", out.max_rows, "colgen");
  read(c, "max_nonzeros", out.max_nonzeros, "colgen");
  read(c, "max_iterations", out.max_iterations, "colgen");
  read(c, "greedy", out.greedy, "colgen");
  read(c, "warm_start", out.warm_start, "colgen");
  read(c, "warm_pool_limit", out.warm_pool_limit, "colgen");
  read(c, "mine_depths", out.mine_grid.depths, "colgen");
  read(c, "mine_trees", out.mine_grid.trees, "colgen");
  read(c, "tol", out.tol, "colgen");
}

}  // namespace

MasterConfig RunConfig::master() const {
  MasterConfig mc;
  mc.C = C;
  mc.objective = objective;
  mc.fairness.metric = metric;
  mc.fairness.epsilon1 = epsilon;
  mc.fairness.epsilon2 = epsilon2;
  return mc;
}

void RunConfig::validate() const {
  if (data.path.empty()) throw ConfigError("data.path is empty");
  if (data.columns.empty()) throw ConfigError("data.columns is empty");
  if (data.preprocess != "none" && data.preprocess != "compas")
    throw ConfigError(fmt::format("unknown preprocess '{}'", data.preprocess));
  for (std::size_t k = 0; k < quantiles.size(); ++k) {
    if (!(quantiles[k] > 0 && quantiles[k] < 1))
      throw ConfigError("binarize.quantiles must lie in (0, 1)");
    if (k > 0 && !(quantiles[k] > quantiles[k - 1]))
      throw ConfigError("binarize.quantiles must be strictly increasing");
  }
  master().validate();
  if (folds < 2) throw ConfigError("split.folds must be at least 2");
  if (holdout_fold < -1 || holdout_fold >= static_cast<int>(folds))
    throw ConfigError("split.holdout_fold must be -1 or a fold index");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir is empty");
  colgen.validate();
  frontier.validate();
}

RunConfig parse_run_config(std::string_view text, const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  allow_keys(j, "config",
             {"data", "binarize", "fairness", "objective", "C", "D", "split", "frontier", "colgen",
              "seed", "jobs", "output_dir"});
  RunConfig rc;
  rc.text = std::string(text);
  parse_data(require(j, "data", "config"), rc.data, base_dir);

  if (j.contains("binarize")) {
    allow_keys(j["binarize"], "binarize", {"quantiles"});
    read(j["binarize"], "quantiles", rc.quantiles, "binarize");
  }
  if (j.contains("fairness")) {
    const auto& f = j["fairness"];
    allow_keys(f, "fairness", {"metric", "epsilon", "epsilon2"});
    std::string metric = "none";
    read(f, "metric", metric, "fairness");
    rc.metric = fairness_metric_from_string(metric);
    read(f, "epsilon", rc.epsilon, "fairness");
    if (f.contains("epsilon2") && !f["epsilon2"].is_null())
      rc.epsilon2 = get<double>(f["epsilon2"], "fairness.epsilon2");
  }
  if (j.contains("objective"))
    rc.objective = master_objective_from_string(get<std::string>(j["objective"], "objective"));
  read(j, "C", rc.C, "config");
  if (j.contains("D") && !j["D"].is_null()) rc.colgen.D = get<int>(j["D"], "D");
  if (j.contains("split")) {
    allow_keys(j["split"], "split", {"folds", "holdout_fold"});
    read(j["split"], "folds", rc.folds, "split");
    read(j["split"], "holdout_fold", rc.holdout_fold, "split");
  }
  if (j.contains("colgen")) parse_colgen(j["colgen"], rc.colgen);
  if (j.contains("frontier")) {
    const auto& fr = j["frontier"];
    allow_keys(fr, "frontier", {"phase1", "epsilons", "C"});
    if (fr.contains("phase1")) {
      allow_keys(fr["phase1"], "frontier.phase1", {"epsilons", "C"});
      read(fr["phase1"], "epsilons", rc.frontier.phase1_epsilons, "frontier.phase1");
      read(fr["phase1"], "C", rc.frontier.phase1_C, "frontier.phase1");
    }
    read(fr, "epsilons", rc.frontier.epsilons, "frontier");
    read(fr, "C", rc.frontier.C, "frontier");
  }
  read(j, "seed", rc.seed, "config");
  read(j, "jobs", rc.jobs, "config");
  read(j, "output_dir", rc.output_dir, "config");

  rc.frontier.metric = rc.metric;
  rc.frontier.objective = rc.objective;
  rc.frontier.colgen = rc.colgen;
  rc.validate();
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_run_config(io::read_file(path), dir.empty() ? "." : dir);
}

RawTable load_table(const DataConfig& data) {
  RawTable t = ingest_csv(data.path, data.columns, data.group_column, data.label_column,
                          data.positive_label);
  if (data.preprocess == "compas") t = preprocess_compas(t);
  return t;
}

}  // namespace fairdnf
