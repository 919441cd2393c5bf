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

// fairdnf: binarize data, train fair DNF rule sets, sweep fairness frontiers
// and evaluate saved rule sets.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fairdnf/colgen.hpp"
#include "fairdnf/errors.hpp"
#include "fairdnf/eval.hpp"
#include "fairdnf/io.hpp"
#include "fairdnf/run_config.hpp"

namespace {

using fairdnf::io::Json;

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kData = 3,
  kInfeasible = 4,
  kTimeout = 5,
};

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<double> cg, pricing, mip;
  std::optional<std::string> out;
  std::string log_level = "info";
  // evaluate
  std::string ruleset;
  std::optional<std::string> data;
  std::optional<std::string> feature_map;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->required();
  cmd->add_option("--seed", o.seed, "override the config seed");
  cmd->add_option("--jobs", o.jobs, "concurrent fold jobs (frontier)");
  cmd->add_option("--time-limit-cg", o.cg, "column generation budget, seconds");
  cmd->add_option("--time-limit-pricing", o.pricing, "per pricing solve, seconds");
  cmd->add_option("--time-limit-mip", o.mip, "master IP budget, seconds");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off");
}

fairdnf::RunConfig load(const Overrides& o, Json& applied) {
  auto rc = fairdnf::load_run_config(o.config);
  applied = Json::object();
  if (o.seed) applied["seed"] = rc.seed = *o.seed;
  if (o.jobs) applied["jobs"] = rc.jobs = *o.jobs;
  if (o.cg) applied["time_limit_cg"] = rc.colgen.time_limit = *o.cg;
  if (o.pricing) applied["time_limit_pricing"] = rc.colgen.pricing_time_limit = *o.pricing;
  if (o.mip) applied["time_limit_mip"] = rc.colgen.mip_time_limit = *o.mip;
  if (o.out) applied["out"] = rc.output_dir = *o.out;
  if (o.data) applied["data"] = rc.data.path = *o.data;
  rc.frontier.colgen = rc.colgen;
  rc.validate();
  return rc;
}

// Every JSON artifact starts with the config text as read plus CLI overrides.
Json envelope(const fairdnf::RunConfig& rc, const Json& applied, const char* command) {
  return Json{{"command", command}, {"config", rc.text}, {"overrides", applied}};
}

std::string path_in(const fairdnf::RunConfig& rc, const std::string& name) {
  return (std::filesystem::path(rc.output_dir) / name).string();
}

void write_common(const fairdnf::RunConfig& rc) {
  fairdnf::io::write_file(path_in(rc, "run_config.json"), rc.text);
}

struct Split {
  fairdnf::BinFeatureMap map;
  fairdnf::BinaryDataset train;
  std::optional<fairdnf::BinaryDataset> test;
};

// The feature map is fit on the training rows only.
Split split_data(const fairdnf::RunConfig& rc) {
  const auto table = fairdnf::load_table(rc.data);
  Split s;
  if (rc.holdout_fold < 0) {
    std::tie(s.map, s.train) = fairdnf::binarize(table, rc.quantiles);
    return s;
  }
  const auto all = fairdnf::binarize(table, rc.quantiles).second;
  const auto folds = fairdnf::make_folds(all, rc.folds, rc.seed);
  const auto tr = folds.train_rows(rc.holdout_fold);
  const auto te = folds.test_rows(rc.holdout_fold);
  std::tie(s.map, s.train) = fairdnf::binarize(table.subset(tr), rc.quantiles);
  s.test = fairdnf::apply_feature_map(s.map, table.subset(te), s.train.group_names());
  return s;
}

void print_metrics(const char* name, const fairdnf::MetricsReport& m) {
  fmt::print("{:>5}: accuracy {:.4f}  eq_opp_gap {:.4f}  eq_odds_gap {:.4f}  complexity {}\n", name,
             m.accuracy, m.eq_opp_gap, m.eq_odds_gap, m.complexity);
}

int cmd_binarize(const Overrides& o) {
  Json applied;
  const auto rc = load(o, applied);
  const auto table = fairdnf::load_table(rc.data);
  const auto [map, ds] = fairdnf::binarize(table, rc.quantiles);
  Json out = envelope(rc, applied, "binarize");
  out["rows"] = ds.n();
  out["feature_map"] = fairdnf::io::to_json(map);
  write_common(rc);
  fairdnf::io::write_file(path_in(rc, "feature_map.json"), out.dump(2) + "\n");
  fairdnf::io::write_file(path_in(rc, "binarized.csv"), fairdnf::io::binary_matrix_csv(ds));
  fmt::print("{} rows, {} binary features -> {}\n", ds.n(), map.p(), rc.output_dir);
  return kOk;
}

int cmd_train(const Overrides& o) {
  Json applied;
  const auto rc = load(o, applied);
  const Split s = split_data(rc);
  spdlog::info("train: {} rows, {} features, C = {}, {} epsilon = {}", s.train.n(), s.train.p(),
               rc.C, fairdnf::to_string(rc.metric), rc.epsilon);
  const auto r = fairdnf::train(s.train, s.map, rc.master(), rc.colgen, rc.seed);

  write_common(rc);
  Json rules = envelope(rc, applied, "train");
  rules.update(fairdnf::io::to_json(r.rules, s.map));
  rules["feature_map_ref"] = "feature_map.json";
  fairdnf::io::write_file(path_in(rc, "ruleset.json"), rules.dump(2) + "\n");
  Json fmap = envelope(rc, applied, "train");
  fmap["feature_map"] = fairdnf::io::to_json(s.map);
  fairdnf::io::write_file(path_in(rc, "feature_map.json"), fmap.dump(2) + "\n");
  fairdnf::io::write_file(path_in(rc, "trace.csv"), r.trace.to_csv());
  Json trace = envelope(rc, applied, "train");
  trace["trace"] = fairdnf::io::to_json(r.trace);
  trace["pool_size"] = r.pool.size();
  trace["mip_status"] = std::string(fairdnf::mip::to_string(r.mip.status));
  trace["mip_seconds"] = r.mip.seconds;
  trace["mip_nodes"] = r.mip.nodes;
  fairdnf::io::write_file(path_in(rc, "trace.json"), trace.dump(2) + "\n");

  Json metrics = envelope(rc, applied, "train");
  const auto tm = fairdnf::evaluate(r.rules, s.train);
  metrics["train"] = fairdnf::io::to_json(tm);
  std::optional<fairdnf::MetricsReport> hm;
  if (s.test) {
    hm = fairdnf::evaluate(r.rules, *s.test);
    metrics["test"] = fairdnf::io::to_json(*hm);
  }
  fairdnf::io::write_file(path_in(rc, "metrics.json"), metrics.dump(2) + "\n");

  fmt::print("{}\n\n", r.rules.empty() ? "(empty rule set: always predicts negative)"
                                       : fairdnf::to_dnf(r.rules, s.map));
  print_metrics("train", tm);
  if (hm) print_metrics("test", *hm);
  fmt::print("column generation: {} iterations, {}, pool {}\n", r.trace.records.size(),
             fairdnf::to_string(r.trace.reason), r.pool.size());
  return kOk;
}

int cmd_frontier(const Overrides& o) {
  Json applied;
  const auto rc = load(o, applied);
  const auto table = fairdnf::load_table(rc.data);
  const auto [map, ds] = fairdnf::binarize(table, rc.quantiles);
  const auto folds = fairdnf::make_folds(ds, rc.folds, rc.seed);
  fairdnf::CvOptions opt;
  opt.jobs = rc.jobs;
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = fairdnf::two_phase_frontier(ds, map, folds, rc.frontier, rc.seed, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_common(rc);
  fairdnf::io::write_file(path_in(rc, "frontier.csv"), fairdnf::io::frontier_csv(run.points));
  fairdnf::io::write_file(path_in(rc, "cells.csv"), fairdnf::io::cells_csv(run.cells));
  Json out = envelope(rc, applied, "frontier");
  out["points"] = Json::array();
  for (const auto& p : run.points) out["points"].push_back(fairdnf::io::to_json(p));
  out["pool_sizes"] = run.pool_sizes;
  out["seconds"] = secs;
  fairdnf::io::write_file(path_in(rc, "frontier.json"), out.dump(2) + "\n");

  fmt::print("{:>8} {:>4} {:>14} {:>14} {:>10}\n", "epsilon", "C", "test_acc", "test_gap",
             "dominated");
  for (const auto& p : run.points)
    fmt::print("{:>8g} {:>4g} {:>7.4f} ({:.3f}) {:>7.4f} ({:.3f}) {:>10}\n", p.epsilon, p.C,
               p.test_accuracy.mean, p.test_accuracy.stddev, p.test_gap.mean, p.test_gap.stddev,
               p.dominated ? "yes" : "no");
  return kOk;
}

int cmd_evaluate(const Overrides& o) {
  Json applied;
  const auto rc = load(o, applied);
  fairdnf::BinFeatureMap map;
  const auto rs = fairdnf::io::rule_set_from_json(
      Json::parse(fairdnf::io::read_file(o.ruleset), nullptr, false), &map);
  if (o.feature_map) {
    const Json fj = Json::parse(fairdnf::io::read_file(*o.feature_map), nullptr, false);
    if (fj.is_discarded()) throw fairdnf::DataError("feature map file is not valid JSON");
    const auto other = fairdnf::io::feature_map_from_json(fj.contains("feature_map") ? fj["feature_map"] : fj);
    if (!(other == map))
      throw fairdnf::DataError("the rule set was built on a different feature map");
  }
  const auto table = fairdnf::load_table(rc.data);
  fairdnf::BinaryDataset ds;
  try {
    ds = fairdnf::apply_feature_map(map, table);
  } catch (const fairdnf::ContractViolation& e) {
    throw fairdnf::DataError(fmt::format("data does not match the rule set's feature map: {}",
                                         e.what()));
  }
  const auto m = fairdnf::evaluate(rs, ds);
  write_common(rc);
  Json out = envelope(rc, applied, "evaluate");
  out["ruleset"] = o.ruleset;
  out["metrics"] = fairdnf::io::to_json(m);
  fairdnf::io::write_file(path_in(rc, "metrics.json"), out.dump(2) + "\n");
  print_metrics("eval", m);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairdnf: fair DNF rule sets via column generation"};
  app.require_subcommand(1);
  Overrides o;
  auto* binarize = app.add_subcommand("binarize", "write the feature map and binarized matrix");
  auto* train = app.add_subcommand("train", "train one rule set on the declared train split");
  auto* frontier = app.add_subcommand("frontier", "two-phase cross-validated fairness frontier");
  auto* evaluate = app.add_subcommand("evaluate", "metrics of a saved rule set on a dataset");
  for (auto* cmd : {binarize, train, frontier, evaluate}) add_common(cmd, o);
  evaluate->add_option("--ruleset", o.ruleset, "ruleset.json written by train")->required();
  evaluate->add_option("--data", o.data, "CSV to evaluate on (defaults to the config's data)");
  evaluate->add_option("--feature-map", o.feature_map, "expected feature map; must match");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  spdlog::set_level(spdlog::level::from_str(o.log_level));
  spdlog::set_pattern("[%l] %v");

  try {
    if (binarize->parsed()) return cmd_binarize(o);
    if (train->parsed()) return cmd_train(o);
    if (frontier->parsed()) return cmd_frontier(o);
    return cmd_evaluate(o);
  } catch (const fairdnf::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfig;
  } catch (const fairdnf::DataError& e) {
    spdlog::error("data error: {}", e.what());
    return kData;
  } catch (const fairdnf::InfeasibleError& e) {
    spdlog::error("infeasible: {}", e.what());
    return kInfeasible;
  } catch (const fairdnf::ResourceError& e) {
    spdlog::error("time limit reached without a feasible rule set: {}", e.what());
    return kTimeout;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
}
