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

// JSON and CSV encodings of the artifacts written by the command-line tool.
// Key order is fixed so repeated runs produce byte-identical files.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fairdnf/colgen.hpp"
#include "fairdnf/data.hpp"
#include "fairdnf/eval.hpp"
#include "fairdnf/master.hpp"

namespace fairdnf::io {

using Json = nlohmann::ordered_json;

Json to_json(const BinFeatureMap& map);
/// Throws DataError on a malformed document.
BinFeatureMap feature_map_from_json(const Json& j);

/// {"clauses": [{"literals", "multiplicity", "text"}], "dnf", "feature_map"}
Json to_json(const RuleSet& rs, const BinFeatureMap& map);
/// Reads a rule set and the feature map stored with it.
RuleSet rule_set_from_json(const Json& j, BinFeatureMap* map);

Json to_json(const MetricsReport& m);
Json to_json(const ColGenTrace& t);
Json to_json(const FrontierPoint& p);

/// metric,epsilon,C,folds,test_acc_mean,test_acc_std,train_acc_mean,
/// train_acc_std,test_gap_mean,test_gap_std,train_gap_mean,train_gap_std,
/// complexity_mean,dominated
std::string frontier_csv(const std::vector<FrontierPoint>& points);

/// metric,epsilon,C,fold,ok,train_acc,test_acc,train_gap,test_gap,complexity
std::string cells_csv(const std::vector<CellResult>& cells);

/// One column per binary feature (f0, f1, ...), then label and group.
std::string binary_matrix_csv(const BinaryDataset& ds);

std::string read_file(const std::string& path);
/// Creates parent directories. Throws DataError when the file cannot be written.
void write_file(const std::string& path, const std::string& text);

}  // namespace fairdnf::io
