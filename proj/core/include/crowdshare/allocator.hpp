// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crowdshare/satisfaction.hpp"

namespace crowdshare::allocator {

using satisfaction::Customer;
using satisfaction::SatisfactionModel;

enum class Objective {
  TotalAbs,       ///< sum |US_i - tau_i|
  MaxAbs,         ///< max |US_i - tau_i|
  TotalOneSided,  ///< sum max(tau_i - US_i, 0)
};

const char* to_string(Objective objective) noexcept;
Objective objective_from_string(const std::string& name);

struct Scenario {
  std::vector<Customer> customers;
  double total_bandwidth = 0.0;
  Objective objective = Objective::TotalAbs;
  SatisfactionModel model = SatisfactionModel::parametric({});
  double a_min = 0.0;

  std::size_t size() const noexcept { return customers.size(); }
  void validate() const;
};

struct Allocation {
  std::vector<double> a;
  double objective_value = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// a_i >= a_min for every customer and sum(a) <= B, summed in index order.
bool is_feasible(std::span<const double> a, const Scenario& scenario);

/// Floors every entry at a_min, shrinks the part above a_min proportionally
/// when the budget is exceeded, then trims rounding overshoot so the sum
/// is <= B exactly.
void project_feasible(std::vector<double>& a, const Scenario& scenario);

/// US_i at bandwidth `a`. A customer with zero bandwidth never receives
/// the image and scores 0.
double customer_satisfaction(const Scenario& scenario, std::size_t i, double a);

std::vector<double> satisfactions(std::span<const double> a, const Scenario& scenario);

/// Pure; throws std::invalid_argument on an infeasible vector.
double evaluate_objective(std::span<const double> a, const Scenario& scenario);

constexpr int kMaxBruteforceCustomers = 3;
constexpr int kMaxBruteforceSteps = 64;

/// Exhaustive search over a_i = a_min + j·(B - n·a_min)/G with sum(j) <= G.
/// The lexicographically first optimum wins.
Allocation allocate_bruteforce(const Scenario& scenario, int grid_steps);

/// Bandwidth-to-threshold split: each customer's required bandwidth plus
/// an equal share of any surplus, or proportional scaling when the
/// requirements exceed B. Needs a parametric model.
Allocation allocate_baseline(const Scenario& scenario);

enum class Strategy { SimulatedAnnealing, Genetic, Tabu };

const char* to_string(Strategy strategy) noexcept;
Strategy strategy_from_string(const std::string& name);

struct AnnealingParams {
  double step_fraction = 1.0 / 50.0;  // transfer size Δ as a fraction of B
  double cooling = 0.95;
  int iterations_per_temperature = 200;
  double stop_ratio = 1e-4;
};

struct GeneticParams {
  int population = 64;
  int generations = 200;
  int elitism = 2;
  double blend_alpha = 0.5;
  double mutation_sd_fraction = 0.01;  // of B
  double mutation_rate = 0.3;          // per gene
};

struct TabuParams {
  int steps = 100;  // B is split into this many units
  int tenure = 20;
  int iterations = 2000;
};

struct MetaheuristicConfig {
  AnnealingParams annealing;
  GeneticParams genetic;
  TabuParams tabu;
  /// Seed the search with the baseline split when the model allows it.
  bool warm_start = true;

  void validate() const;
};

/// Deterministic given (strategy, config, seed). The returned vector is
/// feasible and objective_value == evaluate_objective(a).
Allocation allocate_metaheuristic(const Scenario& scenario, Strategy strategy,
                                  const MetaheuristicConfig& config, std::uint64_t seed);

}  // namespace crowdshare::allocator
