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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairdnf/colgen.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/eval.hpp"
#include "fairdnf/master.hpp"

namespace fairdnf {

struct DataConfig {
  std::string path;  // resolved against the config file's directory
  std::vector<ColumnSpec> columns;
  std::string label_column;
  std::string positive_label = "1";
  std::string group_column;
  std::string preprocess = "none";  // "none" or "compas"
};

/// Everything one command needs. Parsed from a JSON document; unknown keys
/// and missing required fields are ConfigErrors.
struct RunConfig {
  DataConfig data;
  std::vector<double> quantiles = default_quantiles();

  FairnessMetric metric = FairnessMetric::none;
  double epsilon = 1.0;  // train
  std::optional<double> epsilon2;
  MasterObjective objective = MasterObjective::hamming;
  double C = 10.0;  // train

  std::size_t folds = 10;
  int holdout_fold = 0;  // train: held-out fold, -1 to train on every row

  FrontierPlan frontier;  // metric and objective mirror the fields above
  ColGenConfig colgen;

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string output_dir = "out";

  std::string text;  // the document as read, echoed into outputs

  MasterConfig master() const;
  /// Checks every downstream precondition; throws ConfigError.
  void validate() const;
};

/// `base_dir` resolves a relative data path.
RunConfig parse_run_config(std::string_view text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

/// Reads the CSV named by the config and applies the declared preprocessing.
RawTable load_table(const DataConfig& data);

}  // namespace fairdnf
