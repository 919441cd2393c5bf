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

#include "fairdnf/mine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <spdlog/spdlog.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {

int Tree::route(const Bitset& row) const {
  int k = 0;
  while (!nodes[k].leaf()) k = row.test(nodes[k].feature) ? nodes[k].right : nodes[k].left;
  return k;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    best = std::max(best, d[k]);
    if (nodes[k].leaf()) continue;
    d[nodes[k].left] = d[k] + 1;
    d[nodes[k].right] = d[k] + 1;
  }
  return best;
}

void MineGrid::validate() const {
  for (int d : depths)
    if (d < 1) throw ConfigError("mining depths must be at least 1");
  for (int t : trees)
    if (t < 1) throw ConfigError("forest sizes must be at least 1");
}

namespace {

double gini(double pos, double neg) {
  const double n = pos + neg;
  if (n <= 0) return 0.0;
  const double a = pos / n, b = neg / n;
  return n * (1.0 - a * a - b * b);  // weighted by node mass
}

class TreeBuilder {
 public:
  TreeBuilder(const BinaryDataset& ds, const std::vector<double>& w, const TreeOptions& opt)
      : ds_(ds), w_(w), opt_(opt), rng_(opt.seed * 0x2545f4914f6cdd1dULL + 11) {}

  Tree build() {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds_.n(); ++i)
      if (w_[i] > 0) rows.push_back(i);
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(const std::vector<std::size_t>& rows, int depth) {
    double pos = 0, neg = 0;
    for (auto i : rows) (ds_.label(i) == 1 ? pos : neg) += w_[i];
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    {
      auto& node = tree_.nodes.back();
      node.label = pos > neg ? 1 : -1;
      node.positive_weight = pos;
      node.negative_weight = neg;
    }
    if (depth >= opt_.max_depth || pos <= 0 || neg <= 0) return id;

    const int f = best_split(rows, pos, neg);
    if (f < 0) return id;
    std::vector<std::size_t> lo, hi;
    for (auto i : rows) (ds_.x(i, static_cast<std::size_t>(f)) ? hi : lo).push_back(i);
    const int l = grow(lo, depth + 1);
    const int r = grow(hi, depth + 1);
    auto& node = tree_.nodes[id];
    node.feature = f;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<int> candidate_features() {
    const int p = static_cast<int>(ds_.p());
    std::vector<int> all(p);
    for (int j = 0; j < p; ++j) all[j] = j;
    if (opt_.max_features <= 0 || opt_.max_features >= p) return all;
    // Partial Fisher-Yates, then sorted so ties still favor low indices.
    for (int k = 0; k < opt_.max_features; ++k)
      std::swap(all[k], all[k + static_cast<int>(rng_.below(static_cast<std::uint64_t>(p - k)))]);
    all.resize(opt_.max_features);
    std::sort(all.begin(), all.end());
    return all;
  }

  int best_split(const std::vector<std::size_t>& rows, double pos, double neg) {
    const auto feats = candidate_features();
    std::vector<double> hp(ds_.p(), 0.0), hn(ds_.p(), 0.0);
    for (auto i : rows) {
      const bool positive = ds_.label(i) == 1;
      const auto& r = ds_.row(i);
      for (int j : feats)
        if (r.test(static_cast<std::size_t>(j))) (positive ? hp : hn)[j] += w_[i];
    }
    // Zero-gain splits are allowed (as in CART) so XOR-like data can be split.
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int j : feats) {
      const double rp = hp[j], rn = hn[j];
      const double lp = pos - rp, ln = neg - rn;
      if (rp + rn <= 0 || lp + ln <= 0) continue;
      const double child = gini(lp, ln) + gini(rp, rn);
      if (child < best - 1e-12) {
        best = child;
        arg = j;
      }
    }
    return arg;
  }

  const BinaryDataset& ds_;
  const std::vector<double>& w_;
  const TreeOptions& opt_;
  SplitMix64 rng_;
  Tree tree_;
};

}  // namespace

Tree fit_tree(const BinaryDataset& ds, const std::vector<double>& row_weight,
              const TreeOptions& opt) {
  if (ds.n() == 0) throw DataError("fit_tree: empty dataset");
  if (row_weight.size() != ds.n()) throw ContractViolation("fit_tree: weight size mismatch");
  if (opt.max_depth < 0) throw ConfigError("fit_tree: negative depth");
  return TreeBuilder(ds, row_weight, opt).build();
}

Tree fit_tree(const BinaryDataset& ds, int max_depth, std::uint64_t seed) {
  TreeOptions opt;
  opt.max_depth = max_depth;
  opt.seed = seed;
  return fit_tree(ds, ds.weights(), opt);
}

Forest fit_forest(const BinaryDataset& ds, int n_trees, int max_depth, std::uint64_t seed) {
  if (n_trees < 1) throw ConfigError("fit_forest: n_trees must be at least 1");
  if (ds.n() == 0) throw DataError("fit_forest: empty dataset");
  SplitMix64 rng(seed ^ 0xf0e1d2c3b4a59687ULL);
  std::vector<double> cum(ds.n());
  double acc = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) cum[i] = acc += ds.weight(i);
  const auto draws = static_cast<std::size_t>(std::llround(acc));

  Forest f;
  TreeOptions opt;
  opt.max_depth = max_depth;
  opt.max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(ds.p())))));
  for (int t = 0; t < n_trees; ++t) {
    std::vector<int> bag(ds.n(), 0);
    for (std::size_t k = 0; k < draws; ++k) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      if (it == cum.end()) --it;
      ++bag[static_cast<std::size_t>(it - cum.begin())];
    }
    std::vector<double> w(bag.begin(), bag.end());
    opt.seed = rng.next();
    f.trees.push_back(fit_tree(ds, w, opt));
    f.in_bag.push_back(std::move(bag));
  }
  return f;
}

double oob_error(const Forest& forest, const BinaryDataset& ds) {
  double wrong = 0, total = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    int votes = 0, count = 0;
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
      if (forest.in_bag[t][i] > 0) continue;
      votes += forest.trees[t].predict(ds.row(i));
      ++count;
    }
    if (count == 0) continue;
    const int pred = votes > 0 ? 1 : -1;
    total += ds.weight(i);
    if (pred != ds.label(i)) wrong += ds.weight(i);
  }
  return total > 0 ? wrong / total : std::numeric_limits<double>::quiet_NaN();
}

std::vector<Clause> extract_rules(const std::vector<Tree>& trees, const BinFeatureMap& map) {
  std::set<Clause> out;
  std::size_t skipped = 0;
  for (const auto& tree : trees) {
    if (tree.nodes.empty()) continue;
    struct Frame {
      int node;
      std::vector<int> lits;
      bool valid;
    };
    std::vector<Frame> stack = {{0, {}, true}};
    while (!stack.empty()) {
      Frame fr = std::move(stack.back());
      stack.pop_back();
      const auto& node = tree.nodes[fr.node];
      if (node.leaf()) {
        if (node.label != 1 || fr.lits.empty()) continue;
        if (!fr.valid) {
          ++skipped;
          continue;
        }
        out.insert(Clause(fr.lits));
        continue;
      }
      const auto f = static_cast<std::size_t>(node.feature);
      if (f >= map.p()) throw ContractViolation("extract_rules: feature map does not match tree");
      Frame right{node.right, fr.lits, fr.valid};
      right.lits.push_back(node.feature);
      Frame left{node.left, std::move(fr.lits), fr.valid};
      const int comp = map.entries[f].complement;
      if (comp < 0)
        left.valid = false;
      else
        left.lits.push_back(comp);
      stack.push_back(std::move(left));
      stack.push_back(std::move(right));
    }
  }
  if (skipped > 0)
    spdlog::warn("extract_rules: skipped {} positive paths whose complement feature is missing",
                 skipped);
  return {out.begin(), out.end()};
}

std::vector<Clause> mine_rules(const BinaryDataset& ds, const BinFeatureMap& map,
                               const MineGrid& grid, int max_literals, std::uint64_t seed) {
  grid.validate();
  std::set<Clause> pool;
  auto keep = [&](const std::vector<Tree>& trees) {
    for (auto& c : extract_rules(trees, map))
      if (static_cast<int>(c.literals.size()) <= max_literals) pool.insert(std::move(c));
  };
  for (int depth : grid.depths) {
    if (grid.single_trees) keep({fit_tree(ds, depth, seed)});
    for (int t : grid.trees) {
      const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(depth) * 131 +
                              static_cast<std::uint64_t>(t);
      keep(fit_forest(ds, t, depth, s).trees);
    }
  }
  return {pool.begin(), pool.end()};
}

}  // namespace fairdnf
