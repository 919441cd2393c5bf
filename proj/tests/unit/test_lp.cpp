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

#include <cmath>

#include <gtest/gtest.h>

#include "fairdnf/errors.hpp"
#include "fairdnf/lp.hpp"
#include "lp_oracle.hpp"

namespace fairdnf::lp {
namespace {

TEST(SolveLp, SingleVariableLowerRow) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  lp.add_row({{x, 1.0}}, Relation::ge, 3.0);
  auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.primal[0], 3.0, 1e-9);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-9);
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
}

// One positive point, one clause covering it, C = 10, w capped at 1.
TEST(SolveLp, ToyMasterWithUnitBoundDuals) {
  LinearProgram lp;
  const int zeta = lp.add_variable(1.0, 0.0, kInf, "zeta");
  const int w = lp.add_variable(0.0, 0.0, 1.0, "w");
  lp.add_row({{zeta, 1.0}, {w, 1.0}}, Relation::ge, 1.0, "cover");
  lp.add_row({{zeta, 10.0}, {w, 2.0}}, Relation::le, 10.0, "exact");
  lp.add_row({{w, 2.0}}, Relation::le, 10.0, "complexity");
  auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
  EXPECT_NEAR(s.primal[w], 1.0, 1e-12);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-12);
  EXPECT_NEAR(s.duals[1], 0.0, 1e-12);
  EXPECT_NEAR(s.duals[2], 0.0, 1e-12);
  EXPECT_NEAR(s.reduced_costs[w], -1.0, 1e-12);
}

TEST(SolveLp, ToyMasterWithoutBoundIsOptimalZero) {
  LinearProgram lp;
  const int zeta = lp.add_variable(1.0);
  const int w = lp.add_variable(0.0);
  lp.add_row({{zeta, 1.0}, {w, 1.0}}, Relation::ge, 1.0);
  lp.add_row({{zeta, 10.0}, {w, 2.0}}, Relation::le, 10.0);
  lp.add_row({{w, 2.0}}, Relation::le, 10.0);
  auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
  for (double d : s.reduced_costs) EXPECT_GE(d, -1e-9);
}

TEST(SolveLp, Infeasible) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  lp.add_row({{x, 1.0}}, Relation::ge, 1.0);
  lp.add_row({{x, 1.0}}, Relation::le, 0.0);
  EXPECT_EQ(solve_lp(lp).status, LPStatus::infeasible);
}

TEST(SolveLp, Unbounded) {
  LinearProgram lp;
  const int x = lp.add_variable(-1.0);
  const int y = lp.add_variable(0.0);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::le, 2.0);
  EXPECT_EQ(solve_lp(lp).status, LPStatus::unbounded);
}

TEST(SolveLp, EqualityRowsAndFreeDual) {
  LinearProgram lp;
  const int x = lp.add_variable(2.0);
  const int y = lp.add_variable(3.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::eq, 4.0);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::eq, -2.0);
  auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.primal[x], 1.0, 1e-9);
  EXPECT_NEAR(s.primal[y], 3.0, 1e-9);
  EXPECT_NEAR(s.objective, 11.0, 1e-9);
}

TEST(SolveLp, RejectsDanglingVariable) {
  LinearProgram lp;
  lp.add_variable(1.0);
  lp.add_row({{3, 1.0}}, Relation::ge, 1.0);
  EXPECT_THROW(solve_lp(lp), ContractViolation);
}

TEST(SolveLp, IterationCapIsResourceError) {
  auto lp = testing_oracle::random_lp(11, 8, 6);
  SimplexOptions opt;
  opt.max_iterations = 0;
  EXPECT_THROW(solve_lp(lp, opt), ResourceError);
}

TEST(SolveLp, NoImplicitUnitBounds) {
  LinearProgram lp;
  const int x = lp.add_variable(-1.0);
  lp.add_row({{x, 1.0}}, Relation::le, 5.0);
  auto s = solve_lp(lp);
  EXPECT_NEAR(s.primal[x], 5.0, 1e-9);
}

TEST(SolveLp, LpFormatDump) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0, 0.0, 2.0, "x");
  lp.add_row({{x, 1.0}}, Relation::ge, 1.0, "c1");
  const auto text = lp.to_lp_format();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("c1: 1 x >= 1"), std::string::npos);
  EXPECT_NE(text.find("0 <= x <= 2"), std::string::npos);
}

TEST(SolveLpOracle, RandomInstancesMatchVertexEnumeration) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto lp = testing_oracle::random_lp(seed, 8, 6);
    auto s = solve_lp(lp);
    auto best = testing_oracle::vertex_enumeration(lp);
    ASSERT_TRUE(best.has_value()) << "seed " << seed;
    ASSERT_EQ(s.status, LPStatus::optimal) << "seed " << seed;
    EXPECT_NEAR(s.objective, *best, 1e-7 * (1 + std::abs(*best))) << "seed " << seed;
  }
}

TEST(SolveLpProperty, StrongDualityAndComplementarySlackness) {
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    auto lp = testing_oracle::random_lp(seed, 8 + seed % 7, 4 + seed % 5, seed % 2 == 0);
    auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LPStatus::optimal) << "seed " << seed;
    const auto report = testing_oracle::check_optimality(lp, s);
    EXPECT_LE(report.primal_violation, 1e-7) << "seed " << seed;
    EXPECT_LE(report.dual_sign_violation, 1e-7) << "seed " << seed;
    EXPECT_LE(report.duality_gap, 1e-7 * (1 + std::abs(s.objective))) << "seed " << seed;
    EXPECT_LE(report.complementarity, 1e-7) << "seed " << seed;
  }
}

TEST(SolveLpProperty, Deterministic) {
  auto lp = testing_oracle::random_lp(77, 12, 8, true);
  auto a = solve_lp(lp);
  auto b = solve_lp(lp);
  EXPECT_EQ(a.primal, b.primal);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveLpWarmStart, BoundChangeMatchesColdSolve) {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    auto lp = testing_oracle::random_lp(seed, 10, 6, true);
    auto first = solve_lp(lp);
    ASSERT_EQ(first.status, LPStatus::optimal);
    // Tighten the bound of the largest variable, as branching would.
    int j = 0;
    for (int k = 1; k < static_cast<int>(lp.num_variables()); ++k)
      if (first.primal[k] > first.primal[j]) j = k;
    lp.set_bounds(j, 0.0, std::floor(first.primal[j] * 0.5));
    SimplexOptions warm;
    warm.warm_start = &first.basis;
    auto w = solve_lp(lp, warm);
    auto c = solve_lp(lp);
    ASSERT_EQ(w.status, c.status) << "seed " << seed;
    if (c.status == LPStatus::optimal)
      EXPECT_NEAR(w.objective, c.objective, 1e-7 * (1 + std::abs(c.objective)));
  }
}

TEST(SolveLpWarmStart, AppendedColumnMatchesColdSolve) {
  for (std::uint64_t seed = 400; seed < 430; ++seed) {
    auto lp = testing_oracle::random_lp(seed, 8, 6, false);
    auto first = solve_lp(lp);
    ASSERT_EQ(first.status, LPStatus::optimal);
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < static_cast<int>(lp.num_rows()); ++i) entries.push_back({i, 0.5 + i});
    lp.add_column(-3.0, entries);
    SimplexOptions warm;
    warm.warm_start = &first.basis;
    auto w = solve_lp(lp, warm);
    auto c = solve_lp(lp);
    ASSERT_EQ(w.status, c.status);
    if (c.status == LPStatus::optimal) EXPECT_NEAR(w.objective, c.objective, 1e-7);
  }
}


// Degenerate 0/1 covering LPs, the shape the master produces.
TEST(SolveLpProperty, DegenerateCoveringInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SplitMix64 rng(seed);
    LinearProgram lp;
    const int n = 40, m = 30;
    for (int j = 0; j < n; ++j)
      lp.add_variable(static_cast<double>(rng.below(3)), 0.0, seed % 2 ? 1.0 : kInf);
    for (int i = 0; i < m; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < n; ++j)
        if (rng.below(5) == 0) t.push_back({j, 1.0});
      t.push_back({i % n, 1.0});
      lp.add_row(t, Relation::ge, 1.0);
    }
    std::vector<Term> budget;
    for (int j = 0; j < n; ++j) budget.push_back({j, 2.0 + static_cast<double>(rng.below(3))});
    lp.add_row(budget, Relation::le, 60.0);
    auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LPStatus::optimal) << "seed " << seed;
    const auto report = testing_oracle::check_optimality(lp, s);
    EXPECT_LE(report.primal_violation, 1e-7) << "seed " << seed;
    EXPECT_LE(report.dual_sign_violation, 1e-7) << "seed " << seed;
    EXPECT_LE(report.duality_gap, 1e-7 * (1 + std::abs(s.objective))) << "seed " << seed;
  }
}

TEST(SolveLpOracle, BoxedInstancesMatchVertexEnumeration) {
  for (std::uint64_t seed = 500; seed < 530; ++seed) {
    auto lp = testing_oracle::random_lp(seed, 6, 4, true);
    auto s = solve_lp(lp);
    auto best = testing_oracle::vertex_enumeration(lp);
    ASSERT_TRUE(best.has_value());
    ASSERT_EQ(s.status, LPStatus::optimal);
    EXPECT_NEAR(s.objective, *best, 1e-7 * (1 + std::abs(*best))) << "seed " << seed;
  }
}

}  // namespace
}  // namespace fairdnf::lp
