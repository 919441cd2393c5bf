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

#include "fairdnf/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "fairdnf/errors.hpp"

namespace fairdnf {
namespace {

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          record.push_back(std::move(field));
          records.push_back(std::move(record));
        }
        record.clear();
        field.clear();
        any = false;
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "?";
}

double parse_number(const std::string& s, std::size_t row, const std::string& col) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw DataError(fmt::format("row {}: column '{}': cannot parse '{}' as a number", row,
                                col, s));
  return v;
}

std::string format_threshold(double t) {
  if (t == std::floor(t) && std::abs(t) < 1e15) return fmt::format("{}", static_cast<long long>(t));
  return fmt::format("{:g}", t);
}

}  // namespace

// ---------------------------------------------------------------------------

void RawTable::validate() const {
  std::set<std::string> names;
  for (const auto& c : columns) {
    if (!names.insert(c.name).second)
      throw DataError(fmt::format("duplicate column '{}'", c.name));
    if (c.size() != n_rows)
      throw DataError(fmt::format("column '{}' has {} values, expected {}", c.name, c.size(),
                                  n_rows));
  }
  if (labels.size() != n_rows) throw DataError("label count does not match row count");
  if (groups.size() != n_rows) throw DataError("group count does not match row count");
}

const RawColumn* RawTable::find(std::string_view name) const {
  for (const auto& c : columns)
    if (c.name == name) return &c;
  return nullptr;
}

RawTable RawTable::subset(std::span<const std::size_t> rows) const {
  RawTable out;
  out.group_column = group_column;
  out.n_rows = rows.size();
  for (const auto& c : columns) {
    RawColumn nc{c.name, c.kind, {}, {}};
    for (auto r : rows) {
      if (c.kind == ColumnKind::numeric)
        nc.numbers.push_back(c.numbers[r]);
      else
        nc.levels.push_back(c.levels[r]);
    }
    out.columns.push_back(std::move(nc));
  }
  for (auto r : rows) {
    out.labels.push_back(labels[r]);
    out.groups.push_back(groups[r]);
  }
  return out;
}

RawTable parse_csv(std::string_view text, std::span<const ColumnSpec> schema,
                   const std::string& group_column, const std::string& label_column,
                   const std::string& positive_label) {
  auto records = split_csv(text);
  if (records.empty()) throw DataError("CSV input has no header row");
  std::vector<std::string> header;
  for (auto& h : records.front()) header.push_back(trim(h));
  auto index_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ConfigError(fmt::format("column '{}' not found in CSV header", name));
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_idx = index_of(label_column);
  const std::size_t group_idx = index_of(group_column);
  std::vector<std::size_t> feature_idx;
  for (const auto& spec : schema) feature_idx.push_back(index_of(spec.name));

  RawTable table;
  table.group_column = group_column;
  for (const auto& spec : schema) table.columns.push_back({spec.name, spec.kind, {}, {}});

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t row = r - 1;
    if (rec.size() != header.size())
      throw DataError(fmt::format("row {}: expected {} fields, found {}", row, header.size(),
                                  rec.size()));
    auto cell = [&](std::size_t idx, const std::string& name) {
      std::string v = trim(rec[idx]);
      if (is_missing(v))
        throw DataError(fmt::format("row {}: column '{}': missing value", row, name));
      return v;
    };
    table.labels.push_back(cell(label_idx, label_column) == positive_label ? 1 : -1);
    table.groups.push_back(cell(group_idx, group_column));
    for (std::size_t c = 0; c < schema.size(); ++c) {
      std::string v = cell(feature_idx[c], schema[c].name);
      if (schema[c].kind == ColumnKind::numeric)
        table.columns[c].numbers.push_back(parse_number(v, row, schema[c].name));
      else
        table.columns[c].levels.push_back(std::move(v));
    }
  }
  table.n_rows = records.size() - 1;
  table.validate();
  return table;
}

RawTable ingest_csv(const std::string& path, std::span<const ColumnSpec> schema,
                    const std::string& group_column, const std::string& label_column,
                    const std::string& positive_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), schema, group_column, label_column, positive_label);
}

RawTable preprocess_compas(const RawTable& table) {
  constexpr std::string_view kBlack = "African-American";
  constexpr std::string_view kWhite = "Caucasian";
  const bool race_is_group = table.group_column == "race";
  const RawColumn* race = table.find("race");
  if (race == nullptr && !race_is_group)
    throw ConfigError("preprocess_compas: no 'race' column");
  if (race != nullptr && race->kind != ColumnKind::categorical)
    throw ConfigError("preprocess_compas: 'race' must be categorical");
  const auto& race_values = race ? race->levels : table.groups;

  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < table.n_rows; ++r)
    if (race_values[r] == kBlack || race_values[r] == kWhite) keep.push_back(r);
  RawTable out = table.subset(keep);
  std::vector<std::string> indicator;
  for (auto r : keep) indicator.push_back(race_values[r] == kBlack ? "True" : "False");

  for (auto& c : out.columns) {
    if (c.name == "race") {
      c.name = "african_american";
      c.levels = indicator;
    }
  }
  if (race_is_group) {
    out.group_column = "african_american";
    out.groups = indicator;
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(FeatureOp op) {
  switch (op) {
    case FeatureOp::le: return "<=";
    case FeatureOp::gt: return ">";
    case FeatureOp::eq: return "==";
    case FeatureOp::ne: return "!=";
  }
  return "?";
}

FeatureOp feature_op_from_string(std::string_view s) {
  if (s == "<=") return FeatureOp::le;
  if (s == ">") return FeatureOp::gt;
  if (s == "==" || s == "=") return FeatureOp::eq;
  if (s == "!=") return FeatureOp::ne;
  throw DataError(fmt::format("unknown feature operator '{}'", s));
}

std::string BinFeatureMap::describe(std::size_t j) const {
  const auto& e = entries.at(j);
  if (e.op == FeatureOp::le || e.op == FeatureOp::gt)
    return fmt::format("{} {} {}", e.source, to_string(e.op), format_threshold(e.threshold));
  return fmt::format("{} {} {}", e.source, to_string(e.op), e.category);
}

std::vector<double> default_quantiles() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

// ---------------------------------------------------------------------------

BinaryDataset::BinaryDataset(std::size_t p, std::vector<Bitset> rows, std::vector<int> labels,
                             std::vector<int> groups, std::vector<std::string> group_names,
                             std::vector<double> weights)
    : p_(p),
      rows_(std::move(rows)),
      labels_(std::move(labels)),
      groups_(std::move(groups)),
      weights_(std::move(weights)),
      group_names_(std::move(group_names)) {
  const std::size_t n = rows_.size();
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (labels_.size() != n || groups_.size() != n || weights_.size() != n)
    throw ContractViolation("BinaryDataset: per-row vectors disagree in length");
  columns_.assign(p_, Bitset(n));
  zero_sets_.resize(n);
  pos_mask_ = Bitset(n);
  pos_g_.resize(group_names_.size());
  neg_g_.resize(group_names_.size());
  pos_weight_g_.assign(group_names_.size(), 0.0);
  neg_weight_g_.assign(group_names_.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != p_) throw ContractViolation("BinaryDataset: row width != p");
    if (labels_[i] != 1 && labels_[i] != -1)
      throw ContractViolation("BinaryDataset: labels must be +1 or -1");
    if (groups_[i] < 0 || static_cast<std::size_t>(groups_[i]) >= group_names_.size())
      throw ContractViolation("BinaryDataset: group id out of range");
    for (std::size_t j = 0; j < p_; ++j) {
      if (rows_[i].test(j))
        columns_[j].set(i);
      else
        zero_sets_[i].push_back(static_cast<int>(j));
    }
    zero_count_ += zero_sets_[i].size();
    total_weight_ += weights_[i];
    if (labels_[i] == 1) {
      pos_.push_back(i);
      pos_g_[groups_[i]].push_back(i);
      pos_mask_.set(i);
      pos_weight_ += weights_[i];
      pos_weight_g_[groups_[i]] += weights_[i];
    } else {
      neg_.push_back(i);
      neg_g_[groups_[i]].push_back(i);
      neg_weight_ += weights_[i];
      neg_weight_g_[groups_[i]] += weights_[i];
    }
  }
}

BinaryDataset BinaryDataset::subset(std::span<const std::size_t> rows) const {
  std::vector<Bitset> r;
  std::vector<int> y, g;
  std::vector<double> w;
  for (auto i : rows) {
    r.push_back(rows_[i]);
    y.push_back(labels_[i]);
    g.push_back(groups_[i]);
    w.push_back(weights_[i]);
  }
  return BinaryDataset(p_, std::move(r), std::move(y), std::move(g), group_names_,
                       std::move(w));
}

BinaryDataset BinaryDataset::select_features(std::span<const std::size_t> features) const {
  std::vector<Bitset> r;
  r.reserve(n());
  for (std::size_t i = 0; i < n(); ++i) {
    Bitset b(features.size());
    for (std::size_t k = 0; k < features.size(); ++k)
      if (rows_[i].test(features[k])) b.set(k);
    r.push_back(std::move(b));
  }
  return BinaryDataset(features.size(), std::move(r), labels_, groups_, group_names_,
                       weights_);
}

BinaryDataset BinaryDataset::compress(std::vector<std::vector<std::size_t>>* origin) const {
  std::map<std::tuple<std::vector<std::uint64_t>, int, int>, std::size_t> index;
  std::vector<Bitset> r;
  std::vector<int> y, g;
  std::vector<double> w;
  std::vector<std::vector<std::size_t>> from;
  for (std::size_t i = 0; i < n(); ++i) {
    auto key = std::make_tuple(rows_[i].words(), labels_[i], groups_[i]);
    auto [it, inserted] = index.emplace(std::move(key), r.size());
    if (inserted) {
      r.push_back(rows_[i]);
      y.push_back(labels_[i]);
      g.push_back(groups_[i]);
      w.push_back(weights_[i]);
      from.push_back({i});
    } else {
      w[it->second] += weights_[i];
      from[it->second].push_back(i);
    }
  }
  if (origin) *origin = std::move(from);
  return BinaryDataset(p_, std::move(r), std::move(y), std::move(g), group_names_,
                       std::move(w));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> sorted_levels(const std::vector<std::string>& values) {
  std::set<std::string> s(values.begin(), values.end());
  return {s.begin(), s.end()};
}

bool feature_value(const BinFeature& f, const RawColumn& c, std::size_t r) {
  switch (f.op) {
    case FeatureOp::le: return c.numbers[r] <= f.threshold;
    case FeatureOp::gt: return c.numbers[r] > f.threshold;
    case FeatureOp::eq: return c.levels[r] == f.category;
    case FeatureOp::ne: return c.levels[r] != f.category;
  }
  return false;
}

}  // namespace

std::pair<BinFeatureMap, BinaryDataset> binarize(const RawTable& table,
                                                 std::span<const double> quantiles) {
  if (table.n_rows == 0) throw DataError("binarize: empty table");
  for (std::size_t k = 0; k < quantiles.size(); ++k) {
    if (!(quantiles[k] > 0.0 && quantiles[k] < 1.0))
      throw ConfigError("binarize: quantiles must lie in (0, 1)");
    if (k > 0 && !(quantiles[k] > quantiles[k - 1]))
      throw ConfigError("binarize: quantiles must be strictly increasing");
  }
  table.validate();
  BinFeatureMap map;
  const std::size_t n = table.n_rows;
  for (const auto& c : table.columns) {
    if (c.kind == ColumnKind::numeric) {
      std::vector<double> sorted = c.numbers;
      std::sort(sorted.begin(), sorted.end());
      std::vector<double> thresholds;
      for (double q : quantiles) {
        // Guard against q*n landing a hair above an integer (0.3 * 10).
        auto idx = static_cast<long long>(std::ceil(q * static_cast<double>(n) - 1e-9)) - 1;
        idx = std::clamp<long long>(idx, 0, static_cast<long long>(n) - 1);
        const double t = sorted[static_cast<std::size_t>(idx)];
        if (std::find(thresholds.begin(), thresholds.end(), t) == thresholds.end())
          thresholds.push_back(t);
      }
      for (double t : thresholds) {
        const int base = static_cast<int>(map.entries.size());
        map.entries.push_back({c.name, FeatureOp::le, t, {}, base + 1});
        map.entries.push_back({c.name, FeatureOp::gt, t, {}, base});
      }
    } else {
      for (const auto& level : sorted_levels(c.levels)) {
        const int base = static_cast<int>(map.entries.size());
        map.entries.push_back({c.name, FeatureOp::eq, 0.0, level, base + 1});
        map.entries.push_back({c.name, FeatureOp::ne, 0.0, level, base});
      }
    }
  }
  auto ds = apply_feature_map(map, table);
  return {std::move(map), std::move(ds)};
}

BinaryDataset apply_feature_map(const BinFeatureMap& map, const RawTable& table,
                                const std::vector<std::string>& group_names) {
  std::vector<const RawColumn*> source;
  for (const auto& f : map.entries) {
    const RawColumn* c = table.find(f.source);
    if (c == nullptr)
      throw ContractViolation(fmt::format("feature map references missing column '{}'",
                                          f.source));
    const bool numeric_op = f.op == FeatureOp::le || f.op == FeatureOp::gt;
    if (numeric_op != (c->kind == ColumnKind::numeric))
      throw ContractViolation(fmt::format("column '{}' kind does not match feature map",
                                          f.source));
    source.push_back(c);
  }
  std::vector<std::string> names = group_names.empty() ? sorted_levels(table.groups)
                                                        : group_names;
  std::unordered_map<std::string, int> gid;
  for (std::size_t g = 0; g < names.size(); ++g) gid[names[g]] = static_cast<int>(g);

  std::vector<Bitset> rows;
  std::vector<int> groups;
  rows.reserve(table.n_rows);
  for (std::size_t r = 0; r < table.n_rows; ++r) {
    Bitset b(map.p());
    for (std::size_t j = 0; j < map.p(); ++j)
      if (feature_value(map.entries[j], *source[j], r)) b.set(j);
    rows.push_back(std::move(b));
    auto it = gid.find(table.groups[r]);
    if (it == gid.end())
      throw DataError(fmt::format("row {}: unknown group '{}'", r, table.groups[r]));
    groups.push_back(it->second);
  }
  return BinaryDataset(map.p(), std::move(rows), table.labels, std::move(groups),
                       std::move(names));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

FoldPlan make_folds(const BinaryDataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("make_folds: k must be at least 2");
  if (k > ds.n()) throw ConfigError(fmt::format("make_folds: k = {} exceeds n = {}", k, ds.n()));
  std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < ds.n(); ++i) strata[{ds.label(i), ds.group(i)}].push_back(i);
  SplitMix64 rng(seed);
  std::vector<std::size_t> order;
  for (auto& [key, rows] : strata) {
    rng.shuffle(rows);
    order.insert(order.end(), rows.begin(), rows.end());
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(ds.n(), -1);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    plan.assignments[order[pos]] = static_cast<int>(pos % k);
  return plan;
}

}  // namespace fairdnf
