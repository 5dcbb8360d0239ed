// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "crowdshare/allocator.hpp"
#include "test_support.hpp"

namespace crowdshare::allocator {
namespace {

constexpr Objective kObjectives[] = {Objective::TotalAbs, Objective::MaxAbs,
                                     Objective::TotalOneSided};
constexpr Strategy kStrategies[] = {Strategy::SimulatedAnnealing, Strategy::Genetic,
                                    Strategy::Tabu};

double sum(const std::vector<double>& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

Scenario hand_scenario(Objective obj) {
  Scenario sc;
  sc.objective = obj;
  sc.total_bandwidth = 10e6;
  sc.model = SatisfactionModel::parametric({3.0, 2.0});
  for (int i = 0; i < 2; ++i) {
    Customer c;
    c.id = i == 0 ? "a" : "b";
    c.file_bits = 12e6;
    c.quality.weights = {0.0, 0.0, 1.0};
    c.quality.scm = 0.8;
    c.tau = i == 0 ? 0.5 : 0.2;
    sc.customers.push_back(c);
  }
  return sc;
}

TEST(Objective, HandComputedChain) {
  // a gets 4 Mbit/s -> delay 3 s -> US 0.4; b gets 2 Mbit/s -> delay 6 s -> US 0.16.
  const std::vector<double> a{4e6, 2e6};
  EXPECT_NEAR(evaluate_objective(a, hand_scenario(Objective::TotalAbs)), 0.1 + 0.04, 1e-12);
  EXPECT_NEAR(evaluate_objective(a, hand_scenario(Objective::MaxAbs)), 0.1, 1e-12);
  EXPECT_NEAR(evaluate_objective(a, hand_scenario(Objective::TotalOneSided)), 0.14, 1e-12);
  const std::vector<double> over{8e6, 1e6};
  // a: delay 1.5 -> 0.8/1.25 = 0.64 (over target, no one-sided penalty).
  const double us_b = 0.8 / (1.0 + 16.0);
  EXPECT_NEAR(evaluate_objective(over, hand_scenario(Objective::TotalOneSided)), 0.2 - us_b, 1e-12);
  EXPECT_NEAR(evaluate_objective(over, hand_scenario(Objective::TotalAbs)), 0.14 + 0.2 - us_b,
              1e-12);
}

TEST(Objective, ZeroBandwidthMeansZeroSatisfaction) {
  const auto sc = hand_scenario(Objective::TotalAbs);
  EXPECT_EQ(customer_satisfaction(sc, 0, 0.0), 0.0);
  EXPECT_NEAR(evaluate_objective(std::vector<double>{0.0, 0.0}, sc), 0.7, 1e-12);
}

TEST(Objective, InfeasibleRejected) {
  const auto sc = hand_scenario(Objective::TotalAbs);
  EXPECT_THROW(evaluate_objective(std::vector<double>{6e6, 5e6}, sc), std::invalid_argument);
  EXPECT_THROW(evaluate_objective(std::vector<double>{-1.0, 5e6}, sc), std::invalid_argument);
}

TEST(Objective, Names) {
  for (auto o : kObjectives) EXPECT_EQ(objective_from_string(to_string(o)), o);
  for (auto s : kStrategies) EXPECT_EQ(strategy_from_string(to_string(s)), s);
  EXPECT_THROW(objective_from_string("nope"), std::invalid_argument);
}

TEST(ProjectFeasible, AlwaysWithinBudget) {
  auto sc = testing::random_scenario(3, 1, Objective::TotalAbs);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> a{rng.uniform(-1e6, 9e6), rng.uniform(0, 9e6), rng.uniform(0, 9e6)};
    project_feasible(a, sc);
    EXPECT_TRUE(is_feasible(a, sc));
    EXPECT_LE(sum(a), sc.total_bandwidth);
  }
}

TEST(Bruteforce, SingleUnreachableCustomerTakesEverything) {
  auto sc = testing::random_scenario(1, 3, Objective::TotalAbs);
  sc.customers[0].tau = std::min(1.0, sc.customers[0].iq() + 0.05);
  for (auto o : kObjectives) {
    sc.objective = o;
    const auto r = allocate_bruteforce(sc, 41);
    ASSERT_EQ(r.a.size(), 1u);
    EXPECT_EQ(r.a[0], sc.total_bandwidth);
  }
}

TEST(Bruteforce, EnumeratesSimplex) {
  const auto sc = testing::random_scenario(3, 4, Objective::MaxAbs);
  const auto r = allocate_bruteforce(sc, 10);
  EXPECT_EQ(r.evaluations, 286u);  // C(10 + 3, 3)
  EXPECT_TRUE(is_feasible(r.a, sc));
  EXPECT_THROW(allocate_bruteforce(testing::random_scenario(4, 1, Objective::MaxAbs), 10),
               std::invalid_argument);
}

TEST(Bruteforce, MoreBudgetNeverHurts) {
  // Equal grid step: the smaller budget's grid is a subset of the larger one's.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto o : kObjectives) {
      auto sc = testing::random_scenario(2, seed, o);
      sc.total_bandwidth = 4e6;
      const double small = allocate_bruteforce(sc, 20).objective_value;
      sc.total_bandwidth = 8e6;
      const double large = allocate_bruteforce(sc, 40).objective_value;
      EXPECT_LE(large, small + 1e-15);
    }
  }
}

TEST(Baseline, FeasibleAndMeetsThresholdsWhenAffordable) {
  auto sc = testing::random_scenario(3, 5, Objective::TotalOneSided);
  sc.total_bandwidth = 1e12;
  const auto r = allocate_baseline(sc);
  EXPECT_TRUE(is_feasible(r.a, sc));
  EXPECT_NEAR(r.objective_value, 0.0, 1e-9);
  sc.total_bandwidth = 1e5;
  const auto tight = allocate_baseline(sc);
  EXPECT_TRUE(is_feasible(tight.a, sc));
}

TEST(Metaheuristics, FeasibleDeterministicAndNoWorseThanBaseline) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    for (auto o : kObjectives) {
      const auto sc = testing::random_scenario(3, 100 + seed, o);
      const double base = allocate_baseline(sc).objective_value;
      for (auto s : kStrategies) {
        const auto r = allocate_metaheuristic(sc, s, {}, seed);
        EXPECT_TRUE(is_feasible(r.a, sc));
        EXPECT_LE(sum(r.a), sc.total_bandwidth);
        EXPECT_DOUBLE_EQ(r.objective_value, evaluate_objective(r.a, sc));
        EXPECT_LE(r.objective_value, base);
        EXPECT_GT(r.evaluations, 0u);
        EXPECT_EQ(allocate_metaheuristic(sc, s, {}, seed), r);
      }
    }
  }
}

TEST(Metaheuristics, SingleCustomerTakesBudget) {
  auto sc = testing::random_scenario(1, 11, Objective::TotalAbs);
  // Threshold above what the full budget achieves, so every objective
  // wants all of B.
  sc.customers[0].tau = std::min(1.0, customer_satisfaction(sc, 0, sc.total_bandwidth) + 0.01);
  for (auto o : kObjectives) {
    sc.objective = o;
    const auto oracle = allocate_bruteforce(sc, 64);
    for (auto s : kStrategies) {
      const auto r = allocate_metaheuristic(sc, s, {}, 3);
      EXPECT_GE(r.a[0], 0.99 * sc.total_bandwidth);
      EXPECT_NEAR(r.objective_value, oracle.objective_value, 1e-3);
    }
  }
}

TEST(Metaheuristics, CloseToBruteforce) {
  int good = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto o : kObjectives) {
      const auto sc = testing::random_scenario(2 + seed % 2, 200 + seed, o);
      const double oracle = allocate_bruteforce(sc, 41).objective_value;
      for (auto s : kStrategies) {
        const auto r = allocate_metaheuristic(sc, s, {}, seed);
        good += r.objective_value <= 1.02 * oracle + 1e-12 ? 1 : 0;
        ++total;
      }
    }
  }
  EXPECT_GE(good, total * 95 / 100);
}

TEST(Metaheuristics, LearnedModelWithoutBaseline) {
  auto sc = testing::random_scenario(3, 7, Objective::TotalAbs);
  sc.model = satisfaction::train_satisfaction(satisfaction::synthesize_survey({}, 200, 0.0, 1), 5);
  for (auto s : kStrategies) {
    const auto r = allocate_metaheuristic(sc, s, {}, 1);
    EXPECT_TRUE(is_feasible(r.a, sc));
  }
}

TEST(Metaheuristics, ConfigValidated) {
  MetaheuristicConfig cfg;
  cfg.annealing.cooling = 1.5;
  EXPECT_THROW(allocate_metaheuristic(testing::random_scenario(2, 1, Objective::TotalAbs),
                                      Strategy::SimulatedAnnealing, cfg, 1),
               std::invalid_argument);
}

}  // namespace
}  // namespace crowdshare::allocator
