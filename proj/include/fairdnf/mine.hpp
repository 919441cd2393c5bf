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
#include <vector>

#include "fairdnf/data.hpp"
#include "fairdnf/master.hpp"

namespace fairdnf {

/// One node of a binary classification tree over binary features. Rows with
/// feature 0 go left, feature 1 right.
struct TreeNode {
  int feature = -1;  // -1 for a leaf
  int left = -1;
  int right = -1;
  int label = -1;  // leaf prediction in {-1, +1}
  double positive_weight = 0.0;
  double negative_weight = 0.0;

  bool leaf() const { return feature < 0; }
};

/// Nodes in preorder; node 0 is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  int route(const Bitset& row) const;  // leaf index
  int predict(const Bitset& row) const { return nodes[route(row)].label; }
  int depth() const;
};

struct Forest {
  std::vector<Tree> trees;
  /// in_bag[t][i]: bootstrap multiplicity of row i for tree t.
  std::vector<std::vector<int>> in_bag;
};

struct MineGrid {
  std::vector<int> depths = {1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29};
  std::vector<int> trees = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  bool single_trees = true;

  void validate() const;
};

struct TreeOptions {
  int max_depth = 3;
  /// Features tried per split; 0 means all of them.
  int max_features = 0;
  std::uint64_t seed = 0;
};

/// CART with weighted Gini impurity; ties go to the lowest feature index.
Tree fit_tree(const BinaryDataset& ds, int max_depth, std::uint64_t seed = 0);
/// Weighted variant; `row_weight` overrides the dataset weights.
Tree fit_tree(const BinaryDataset& ds, const std::vector<double>& row_weight,
              const TreeOptions& opt);

/// Bootstrap rows (proportional to weight), sqrt(p) features per split.
Forest fit_forest(const BinaryDataset& ds, int n_trees, int max_depth, std::uint64_t seed);

/// Weighted majority vote error over rows outside each tree's bootstrap;
/// rows in every bag are skipped. NaN if no row is out of bag.
double oob_error(const Forest& forest, const BinaryDataset& ds);

/// One clause per positive leaf. A "feature = 0" edge maps to the paired
/// complement feature; paths needing a missing complement are skipped.
std::vector<Clause> extract_rules(const std::vector<Tree>& trees, const BinFeatureMap& map);

/// Trees and forests over the grid; clauses above `max_literals` dropped.
std::vector<Clause> mine_rules(const BinaryDataset& ds, const BinFeatureMap& map,
                               const MineGrid& grid, int max_literals, std::uint64_t seed);

}  // namespace fairdnf
