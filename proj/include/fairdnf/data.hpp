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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairdnf/bitset.hpp"

namespace fairdnf {

// ---------------------------------------------------------------------------
// Raw (pre-binarization) tables
// ---------------------------------------------------------------------------

enum class ColumnKind { numeric, categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
};

struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<double> numbers;      // numeric columns
  std::vector<std::string> levels;  // categorical columns

  std::size_t size() const {
    return kind == ColumnKind::numeric ? numbers.size() : levels.size();
  }
};

/// Feature columns plus the extracted label (+1/-1) and group columns.
struct RawTable {
  std::vector<RawColumn> columns;
  std::vector<int> labels;
  std::vector<std::string> groups;
  std::string group_column;
  std::size_t n_rows = 0;

  /// Throws DataError if column lengths disagree or names repeat.
  void validate() const;
  const RawColumn* find(std::string_view name) const;
  RawTable subset(std::span<const std::size_t> rows) const;
};

/// Reads a headered CSV. Only columns named in `schema` become features; the
/// group column may also appear in the schema (it is then both).
RawTable ingest_csv(const std::string& path, std::span<const ColumnSpec> schema,
                    const std::string& group_column, const std::string& label_column,
                    const std::string& positive_label);

/// Same as ingest_csv but over in-memory CSV text.
RawTable parse_csv(std::string_view text, std::span<const ColumnSpec> schema,
                   const std::string& group_column, const std::string& label_column,
                   const std::string& positive_label);

/// Keeps African-American and Caucasian rows and replaces the `race` column
/// with a binary `african_american` indicator (also used as group if race was).
RawTable preprocess_compas(const RawTable& table);

// ---------------------------------------------------------------------------
// Binarization
// ---------------------------------------------------------------------------

enum class FeatureOp { le, gt, eq, ne };

std::string_view to_string(FeatureOp op);
FeatureOp feature_op_from_string(std::string_view s);

struct BinFeature {
  std::string source;
  FeatureOp op = FeatureOp::le;
  double threshold = 0.0;  // le / gt
  std::string category;    // eq / ne
  int complement = -1;     // index of the paired negated feature, -1 if absent

  bool operator==(const BinFeature&) const = default;
};

struct BinFeatureMap {
  std::vector<BinFeature> entries;

  std::size_t p() const { return entries.size(); }
  /// Human-readable condition, e.g. "priors_count <= 2".
  std::string describe(std::size_t j) const;
  bool operator==(const BinFeatureMap&) const = default;
};

std::vector<double> default_quantiles();

/// Binarized data. Rows may carry integer multiplicities (see compress()):
/// every count below (|P|, |P_g|, ...) is weighted by them.
class BinaryDataset {
 public:
  BinaryDataset() = default;
  BinaryDataset(std::size_t p, std::vector<Bitset> rows, std::vector<int> labels,
                std::vector<int> groups, std::vector<std::string> group_names,
                std::vector<double> weights = {});

  std::size_t n() const { return rows_.size(); }
  std::size_t p() const { return p_; }
  std::size_t num_groups() const { return group_names_.size(); }

  const Bitset& row(std::size_t i) const { return rows_[i]; }
  bool x(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
  /// Rows with feature j equal to 1.
  const Bitset& column(std::size_t j) const { return columns_[j]; }
  const std::vector<int>& zero_set(std::size_t i) const { return zero_sets_[i]; }

  int label(std::size_t i) const { return labels_[i]; }
  int group(std::size_t i) const { return groups_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& groups() const { return groups_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& group_names() const { return group_names_; }

  const std::vector<std::size_t>& positives() const { return pos_; }
  const std::vector<std::size_t>& negatives() const { return neg_; }
  const std::vector<std::size_t>& positives_in(int g) const { return pos_g_[g]; }
  const std::vector<std::size_t>& negatives_in(int g) const { return neg_g_[g]; }
  /// Bitset of positive / negative rows.
  const Bitset& positive_mask() const { return pos_mask_; }

  double total_weight() const { return total_weight_; }
  double positive_weight() const { return pos_weight_; }
  double negative_weight() const { return neg_weight_; }
  double positive_weight(int g) const { return pos_weight_g_[g]; }
  double negative_weight(int g) const { return neg_weight_g_[g]; }

  /// Entries of the zero sets, i.e. nonzeros of the pricing constraints.
  std::size_t zero_count() const { return zero_count_; }

  BinaryDataset subset(std::span<const std::size_t> rows) const;
  /// Keeps only the listed features, in that order.
  BinaryDataset select_features(std::span<const std::size_t> features) const;

  /// Merges rows with identical (features, label, group) into one weighted
  /// row. `origin[k]` lists the source rows of compressed row k.
  BinaryDataset compress(std::vector<std::vector<std::size_t>>* origin = nullptr) const;

 private:
  std::size_t p_ = 0;
  std::vector<Bitset> rows_;
  std::vector<Bitset> columns_;
  std::vector<std::vector<int>> zero_sets_;
  std::vector<int> labels_;
  std::vector<int> groups_;
  std::vector<double> weights_;
  std::vector<std::string> group_names_;
  std::vector<std::size_t> pos_, neg_;
  std::vector<std::vector<std::size_t>> pos_g_, neg_g_;
  Bitset pos_mask_;
  double total_weight_ = 0, pos_weight_ = 0, neg_weight_ = 0;
  std::vector<double> pos_weight_g_, neg_weight_g_;
  std::size_t zero_count_ = 0;
};

/// Thresholds are lower empirical quantiles (sorted[ceil(q n) - 1]); repeated
/// thresholds are dropped. Categorical levels are emitted in sorted order.
std::pair<BinFeatureMap, BinaryDataset> binarize(const RawTable& table,
                                                 std::span<const double> quantiles);
inline std::pair<BinFeatureMap, BinaryDataset> binarize(const RawTable& table) {
  const auto q = default_quantiles();
  return binarize(table, q);
}

/// Applies an existing map (e.g. fit on a training split) to a table.
/// Group ids are assigned against `group_names` when given.
BinaryDataset apply_feature_map(const BinFeatureMap& map, const RawTable& table,
                                const std::vector<std::string>& group_names = {});

// ---------------------------------------------------------------------------
// Cross-validation folds
// ---------------------------------------------------------------------------

struct FoldPlan {
  std::size_t k = 10;
  std::vector<int> assignments;
  std::uint64_t seed = 0;

  std::vector<std::size_t> train_rows(int fold) const;
  std::vector<std::size_t> test_rows(int fold) const;
};

/// Stratified by (label, group); deterministic given the seed.
FoldPlan make_folds(const BinaryDataset& ds, std::size_t k, std::uint64_t seed);

/// Portable uniform integer in [0, bound) from a 64-bit engine state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

}  // namespace fairdnf
