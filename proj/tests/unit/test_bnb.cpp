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

#include "fairdnf/bnb.hpp"
#include "fairdnf/errors.hpp"
#include "mip_oracle.hpp"

namespace fairdnf::mip {
namespace {

using lp::Relation;

TEST(SolveMip, TwoItemKnapsack) {
  IntegerProgram ip;
  ip.lp.add_variable(-3.0, 0.0, 1.0);
  ip.lp.add_variable(-2.0, 0.0, 1.0);
  ip.mark_integer(0);
  ip.mark_integer(1);
  ip.lp.add_row({{0, 1.0}, {1, 1.0}}, Relation::le, 1.0);
  auto r = solve_mip(ip);
  ASSERT_EQ(r.status, MIPStatus::optimal);
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
  EXPECT_NEAR(r.x[1], 0.0, 1e-9);
  EXPECT_NEAR(-r.objective, 3.0, 1e-9);
}

TEST(SolveMip, ContradictionIsInfeasibleStatus) {
  IntegerProgram ip;
  ip.lp.add_variable(1.0);
  ip.mark_integer(0);
  ip.lp.add_row({{0, 1.0}}, Relation::ge, 1.0);
  ip.lp.add_row({{0, 1.0}}, Relation::le, 0.0);
  auto r = solve_mip(ip);
  EXPECT_EQ(r.status, MIPStatus::infeasible);
  EXPECT_FALSE(r.has_incumbent());
}

TEST(SolveMip, FractionalRelaxationNeedsBranching) {
  // max x + y s.t. 2x + 2y <= 3 over integers: relaxation 1.5, integer 1.
  IntegerProgram ip;
  ip.lp.add_variable(-1.0);
  ip.lp.add_variable(-1.0);
  ip.mark_integer(0);
  ip.mark_integer(1);
  ip.lp.add_row({{0, 2.0}, {1, 2.0}}, Relation::le, 3.0);
  auto r = solve_mip(ip);
  ASSERT_EQ(r.status, MIPStatus::optimal);
  EXPECT_NEAR(r.objective, -1.0, 1e-9);
  EXPECT_GT(r.nodes, 1);
}

TEST(SolveMip, RejectsNonPositiveTimeLimit) {
  IntegerProgram ip;
  ip.lp.add_variable(1.0);
  MIPOptions opt;
  opt.time_limit = 0;
  EXPECT_THROW(solve_mip(ip, opt), ContractViolation);
}

TEST(SolveMipOracle, RandomTenBinaryInstancesMatchEnumeration) {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto ip = testing_oracle::random_binary_ip(seed, 10, 3 + static_cast<int>(seed % 4));
    auto r = solve_mip(ip);
    auto best = testing_oracle::enumerate_binary(ip);
    if (!best) {
      EXPECT_EQ(r.status, MIPStatus::infeasible) << "seed " << seed;
      continue;
    }
    ++feasible;
    ASSERT_EQ(r.status, MIPStatus::optimal) << "seed " << seed;
    EXPECT_NEAR(r.objective, *best, 1e-9) << "seed " << seed;
  }
  EXPECT_GT(feasible, 30);
}

TEST(SolveMipProperty, PoolStrictlyDecreasingAndFeasible) {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    auto ip = testing_oracle::random_binary_ip(seed, 12, 4);
    auto r = solve_mip(ip);
    if (!r.has_incumbent()) continue;
    for (std::size_t k = 0; k < r.pool.size(); ++k) {
      EXPECT_LE(ip.lp.max_violation(r.pool[k].x), 1e-6);
      for (double v : r.pool[k].x) EXPECT_NEAR(v, std::round(v), 1e-6);
      if (k > 0) EXPECT_LT(r.pool[k].objective, r.pool[k - 1].objective);
    }
    EXPECT_DOUBLE_EQ(r.pool.back().objective, r.objective);
    EXPECT_LE(r.bound, r.objective + 1e-7);
  }
}

TEST(SolveMipProperty, BoundValidUnderNodeLimit) {
  for (std::uint64_t seed = 300; seed < 360; ++seed) {
    auto ip = testing_oracle::random_binary_ip(seed, 12, 5);
    auto best = testing_oracle::enumerate_binary(ip);
    MIPOptions opt;
    opt.node_limit = 3;
    auto r = solve_mip(ip, opt);
    if (best) EXPECT_LE(r.bound, *best + 1e-7) << "seed " << seed;
    if (r.status == MIPStatus::feasible_timeout) EXPECT_LE(r.bound, r.objective + 1e-7);
  }
}

TEST(SolveMipProperty, DeterministicNodeOrder) {
  auto ip = testing_oracle::random_binary_ip(17, 12, 5);
  auto a = solve_mip(ip);
  auto b = solve_mip(ip);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.x, b.x);
  ASSERT_EQ(a.pool.size(), b.pool.size());
}

TEST(SolveMip, CollectAllGathersDistinctPoints) {
  auto ip = testing_oracle::random_binary_ip(5, 8, 2);
  MIPOptions opt;
  opt.collect_all = true;
  auto r = solve_mip(ip, opt);
  ASSERT_TRUE(r.has_incumbent());
  EXPECT_GE(r.all_solutions.size(), r.pool.size());
  for (const auto& s : r.all_solutions) EXPECT_LE(ip.lp.max_violation(s.x), 1e-6);
}

TEST(SolveMip, HeuristicIncumbentIsChecked) {
  IntegerProgram ip;
  ip.lp.add_variable(-1.0, 0.0, 1.0);
  ip.mark_integer(0);
  ip.lp.add_row({{0, 2.0}}, Relation::le, 1.0);
  MIPOptions opt;
  int calls = 0;
  opt.heuristic = [&](const std::vector<double>&) -> std::optional<std::vector<double>> {
    ++calls;
    return std::vector<double>{1.0};  // infeasible, must be rejected
  };
  auto r = solve_mip(ip, opt);
  EXPECT_GT(calls, 0);
  ASSERT_EQ(r.status, MIPStatus::optimal);
  EXPECT_NEAR(r.x[0], 0.0, 1e-9);
}

}  // namespace
}  // namespace fairdnf::mip
