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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "fairdnf/data.hpp"
#include "fairdnf/errors.hpp"

namespace fairdnf {
namespace {

const std::vector<ColumnSpec> kAgeSex = {{"age", ColumnKind::numeric},
                                         {"sex", ColumnKind::categorical}};

TEST(IngestCsv, ReadsFourRowFile) {
  const char* text = "age,sex,y,grp\n30,M,1,a\n40,F,0,b\n25,F,1,a\n61,M,0,b\n";
  auto t = parse_csv(text, kAgeSex, "grp", "y", "1");
  EXPECT_EQ(t.n_rows, 4u);
  ASSERT_EQ(t.columns.size(), 2u);
  EXPECT_EQ(t.columns[0].numbers, (std::vector<double>{30, 40, 25, 61}));
  EXPECT_EQ(t.columns[1].levels, (std::vector<std::string>{"M", "F", "F", "M"}));
  EXPECT_EQ(t.labels, (std::vector<int>{1, -1, 1, -1}));
  EXPECT_EQ(t.groups, (std::vector<std::string>{"a", "b", "a", "b"}));
}

TEST(IngestCsv, MissingLabelColumnIsConfigError) {
  const char* text = "age,sex,grp\n30,M,a\n";
  EXPECT_THROW(parse_csv(text, kAgeSex, "grp", "y", "1"), ConfigError);
}

TEST(IngestCsv, BadNumberIsDataErrorNamingRowAndColumn) {
  const char* text = "age,sex,y,grp\n30,M,1,a\nold,F,0,b\n";
  try {
    parse_csv(text, kAgeSex, "grp", "y", "1");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos);
    EXPECT_NE(msg.find("age"), std::string::npos);
  }
}

TEST(IngestCsv, MissingValueRejected) {
  const char* text = "age,sex,y,grp\n,M,1,a\n";
  EXPECT_THROW(parse_csv(text, kAgeSex, "grp", "y", "1"), DataError);
}

TEST(IngestCsv, QuotedFieldsAndCrlf) {
  const char* text = "age,sex,y,grp\r\n30,\"M, x\",1,a\r\n";
  auto t = parse_csv(text, kAgeSex, "grp", "y", "1");
  EXPECT_EQ(t.columns[1].levels[0], "M, x");
}

TEST(IngestCsv, UnreadablePathIsConfigError) {
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv", kAgeSex, "grp", "y", "1"), ConfigError);
}

RawTable race_table(std::vector<std::string> races) {
  RawTable t;
  t.n_rows = races.size();
  t.columns.push_back({"race", ColumnKind::categorical, {}, races});
  t.columns.push_back({"x", ColumnKind::numeric, std::vector<double>(races.size(), 1.0), {}});
  t.labels.assign(races.size(), 1);
  t.groups = races;
  t.group_column = "race";
  return t;
}

TEST(PreprocessCompas, FiltersToTwoRaces) {
  auto out = preprocess_compas(race_table({"African-American", "Caucasian", "Hispanic"}));
  EXPECT_EQ(out.n_rows, 2u);
  EXPECT_EQ(out.groups, (std::vector<std::string>{"True", "False"}));
  EXPECT_EQ(out.group_column, "african_american");
  ASSERT_NE(out.find("african_american"), nullptr);
  EXPECT_EQ(out.find("race"), nullptr);
}

TEST(PreprocessCompas, IdempotentOnFilteredInput) {
  auto once = preprocess_compas(race_table({"African-American", "Caucasian", "Caucasian"}));
  EXPECT_EQ(once.n_rows, 3u);
}

TEST(PreprocessCompas, MissingRaceIsConfigError) {
  RawTable t;
  t.n_rows = 1;
  t.columns.push_back({"x", ColumnKind::numeric, {1.0}, {}});
  t.labels = {1};
  t.groups = {"a"};
  t.group_column = "sex";
  EXPECT_THROW(preprocess_compas(t), ConfigError);
}

#ifdef FAIRDNF_DATA_DIR
TEST(PreprocessCompas, FullCompasHas5278Rows) {
  const std::vector<ColumnSpec> schema = {{"priors_count", ColumnKind::numeric},
                                          {"score_factor", ColumnKind::categorical},
                                          {"age_above_45", ColumnKind::categorical},
                                          {"age_below_25", ColumnKind::categorical},
                                          {"race", ColumnKind::categorical},
                                          {"female", ColumnKind::categorical},
                                          {"misdemeanor", ColumnKind::categorical}};
  auto raw = ingest_csv(std::string(FAIRDNF_DATA_DIR) + "/compas/compas.csv", schema, "race",
                        "two_year_recid", "1");
  auto t = preprocess_compas(raw);
  EXPECT_EQ(t.n_rows, 5278u);
  EXPECT_EQ(t.columns.size(), 7u);
  std::set<std::string> g(t.groups.begin(), t.groups.end());
  EXPECT_EQ(g.size(), 2u);
}
#endif

RawTable numeric_table(std::vector<double> v) {
  RawTable t;
  t.n_rows = v.size();
  t.columns.push_back({"v", ColumnKind::numeric, std::move(v), {}});
  t.labels.assign(t.n_rows, 1);
  t.labels[0] = -1;
  t.groups.assign(t.n_rows, "g");
  t.group_column = "grp";
  return t;
}

TEST(Binarize, ConstantColumnGivesTwoFeatures) {
  auto [map, ds] = binarize(numeric_table(std::vector<double>(7, 3.5)));
  ASSERT_EQ(map.p(), 2u);
  EXPECT_EQ(ds.column(0).count(), 7u);
  EXPECT_EQ(ds.column(1).count(), 0u);
}

TEST(Binarize, CategoricalTwoLevels) {
  RawTable t;
  t.n_rows = 3;
  t.columns.push_back({"c", ColumnKind::categorical, {}, {"a", "b", "a"}});
  t.labels = {1, -1, 1};
  t.groups = {"g", "g", "h"};
  t.group_column = "grp";
  auto [map, ds] = binarize(t);
  ASSERT_EQ(map.p(), 4u);
  // (=a, !=a, =b, !=b)
  EXPECT_TRUE(ds.x(0, 0));
  EXPECT_FALSE(ds.x(0, 1));
  EXPECT_FALSE(ds.x(0, 2));
  EXPECT_TRUE(ds.x(0, 3));
  EXPECT_EQ(map.describe(0), "c == a");
}

TEST(Binarize, OneToTenGivesEighteenFeatures) {
  std::vector<double> v;
  for (int k = 1; k <= 10; ++k) v.push_back(k);
  auto [map, ds] = binarize(numeric_table(v));
  ASSERT_EQ(map.p(), 18u);
  // Oracle: lower quantile of 1..10 at q = k/10 is the value k.
  for (int k = 1; k <= 9; ++k) {
    EXPECT_EQ(map.entries[2 * (k - 1)].threshold, k);
    EXPECT_EQ(map.entries[2 * (k - 1)].op, FeatureOp::le);
    EXPECT_EQ(map.entries[2 * (k - 1) + 1].op, FeatureOp::gt);
  }
  for (std::size_t i = 0; i < ds.n(); ++i)
    for (std::size_t j = 0; j < map.p(); ++j) {
      const auto& f = map.entries[j];
      const bool want = f.op == FeatureOp::le ? v[i] <= f.threshold : v[i] > f.threshold;
      EXPECT_EQ(ds.x(i, j), want);
    }
}

TEST(Binarize, EmptyTableIsDataError) {
  RawTable t;
  t.columns.push_back({"v", ColumnKind::numeric, {}, {}});
  EXPECT_THROW(binarize(t), DataError);
}

TEST(Binarize, BadQuantilesRejected) {
  const std::vector<double> q = {0.5, 0.2};
  EXPECT_THROW(binarize(numeric_table({1, 2, 3}), q), ConfigError);
}

RawTable random_table(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  RawTable t;
  t.n_rows = n;
  RawColumn a{"a", ColumnKind::numeric, {}, {}};
  RawColumn b{"b", ColumnKind::categorical, {}, {}};
  RawColumn c{"c", ColumnKind::numeric, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    a.numbers.push_back(static_cast<double>(rng.below(7)));
    b.levels.push_back(std::string(1, static_cast<char>('p' + rng.below(3))));
    c.numbers.push_back(rng.uniform());
    t.labels.push_back(rng.below(2) ? 1 : -1);
    t.groups.push_back(rng.below(3) == 0 ? "x" : "y");
  }
  t.columns = {a, b, c};
  t.group_column = "grp";
  return t;
}

TEST(BinarizeProperty, ZeroSetsPairsAndDeterminism) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto t = random_table(seed, 40);
    auto [map, ds] = binarize(t);
    auto [map2, ds2] = binarize(t);
    EXPECT_EQ(map, map2);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      std::set<int> zs(ds.zero_set(i).begin(), ds.zero_set(i).end());
      for (std::size_t j = 0; j < ds.p(); ++j) {
        EXPECT_EQ(zs.count(static_cast<int>(j)) == 1, !ds.x(i, j));
        const int c = map.entries[j].complement;
        ASSERT_GE(c, 0);
        EXPECT_EQ(map.entries[c].complement, static_cast<int>(j));
        EXPECT_NE(ds.x(i, j), ds.x(i, static_cast<std::size_t>(c)));
      }
    }
  }
}

TEST(BinaryDatasetTest, IndexSetsPartitionRows) {
  auto [map, ds] = binarize(random_table(7, 60));
  std::vector<int> seen(ds.n(), 0);
  for (auto i : ds.positives()) {
    EXPECT_EQ(ds.label(i), 1);
    ++seen[i];
  }
  for (auto i : ds.negatives()) {
    EXPECT_EQ(ds.label(i), -1);
    ++seen[i];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  std::size_t pg = 0, ng = 0;
  for (std::size_t g = 0; g < ds.num_groups(); ++g) {
    for (auto i : ds.positives_in(static_cast<int>(g))) EXPECT_EQ(ds.group(i), static_cast<int>(g));
    pg += ds.positives_in(static_cast<int>(g)).size();
    ng += ds.negatives_in(static_cast<int>(g)).size();
  }
  EXPECT_EQ(pg, ds.positives().size());
  EXPECT_EQ(ng, ds.negatives().size());
}

TEST(BinaryDatasetTest, CompressPreservesWeightedCounts) {
  auto [map, ds] = binarize(random_table(3, 200));
  std::vector<std::vector<std::size_t>> origin;
  auto c = ds.compress(&origin);
  EXPECT_LT(c.n(), ds.n());
  EXPECT_DOUBLE_EQ(c.total_weight(), static_cast<double>(ds.n()));
  EXPECT_DOUBLE_EQ(c.positive_weight(), static_cast<double>(ds.positives().size()));
  for (std::size_t g = 0; g < ds.num_groups(); ++g) {
    EXPECT_DOUBLE_EQ(c.negative_weight(static_cast<int>(g)),
                     static_cast<double>(ds.negatives_in(static_cast<int>(g)).size()));
  }
  for (std::size_t k = 0; k < c.n(); ++k) {
    EXPECT_EQ(static_cast<double>(origin[k].size()), c.weight(k));
    for (auto i : origin[k]) {
      EXPECT_EQ(ds.row(i), c.row(k));
      EXPECT_EQ(ds.label(i), c.label(k));
      EXPECT_EQ(ds.group(i), c.group(k));
    }
  }
}

BinaryDataset labelled(std::size_t n, std::size_t positives) {
  std::vector<Bitset> rows(n, Bitset(1));
  std::vector<int> y(n, -1), g(n, 0);
  for (std::size_t i = 0; i < positives; ++i) y[i] = 1;
  return BinaryDataset(1, rows, y, g, {"all"});
}

TEST(MakeFolds, TenRowsTenFolds) {
  auto plan = make_folds(labelled(10, 4), 10, 1);
  for (int f = 0; f < 10; ++f) EXPECT_EQ(plan.test_rows(f).size(), 1u);
}

TEST(MakeFolds, StratifiedPositives) {
  auto ds = labelled(100, 60);
  auto plan = make_folds(ds, 10, 42);
  for (int f = 0; f < 10; ++f) {
    int pos = 0;
    for (auto i : plan.test_rows(f)) pos += ds.label(i) == 1;
    EXPECT_GE(pos, 5);
    EXPECT_LE(pos, 7);
  }
}

TEST(MakeFolds, DeterministicPartitionBalanced) {
  auto [map, ds] = binarize(random_table(9, 97));
  auto a = make_folds(ds, 10, 5);
  auto b = make_folds(ds, 10, 5);
  EXPECT_EQ(a.assignments, b.assignments);
  std::map<int, int> sizes;
  for (int f : a.assignments) {
    ASSERT_GE(f, 0);
    ASSERT_LT(f, 10);
    ++sizes[f];
  }
  int lo = 1 << 30, hi = 0;
  for (auto& [f, s] : sizes) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  EXPECT_LE(hi - lo, 1);
}

TEST(MakeFolds, InvalidK) {
  EXPECT_THROW(make_folds(labelled(5, 2), 6, 1), ConfigError);
  EXPECT_THROW(make_folds(labelled(5, 2), 1, 1), ConfigError);
}

}  // namespace
}  // namespace fairdnf
