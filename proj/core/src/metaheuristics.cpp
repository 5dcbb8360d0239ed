// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "crowdshare/allocator.hpp"
#include "crowdshare/rng.hpp"

namespace crowdshare::allocator {

const char* to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::SimulatedAnnealing: return "sa";
    case Strategy::Genetic: return "ga";
    case Strategy::Tabu: return "tabu";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "sa") return Strategy::SimulatedAnnealing;
  if (name == "ga") return Strategy::Genetic;
  if (name == "tabu") return Strategy::Tabu;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

void MetaheuristicConfig::validate() const {
  const auto& sa = annealing;
  if (!(sa.step_fraction > 0.0) || !(sa.cooling > 0.0 && sa.cooling < 1.0) ||
      sa.iterations_per_temperature < 1 || !(sa.stop_ratio > 0.0 && sa.stop_ratio < 1.0)) {
    throw std::invalid_argument("invalid simulated annealing parameters");
  }
  const auto& ga = genetic;
  if (ga.population < 2 || ga.generations < 0 || ga.elitism < 0 || ga.elitism >= ga.population ||
      !(ga.blend_alpha >= 0.0) || !(ga.mutation_sd_fraction >= 0.0) ||
      !(ga.mutation_rate >= 0.0 && ga.mutation_rate <= 1.0)) {
    throw std::invalid_argument("invalid genetic algorithm parameters");
  }
  if (tabu.steps < 1 || tabu.tenure < 0 || tabu.iterations < 0) {
    throw std::invalid_argument("invalid tabu search parameters");
  }
}

namespace {

/// Counts objective evaluations and remembers the best vector seen.
class Search {
 public:
  explicit Search(const Scenario& scenario) : scenario_(scenario) {}

  double evaluate(const std::vector<double>& a) {
    const double value = evaluate_objective(a, scenario_);
    ++evaluations_;
    if (value < best_value_) {
      best_value_ = value;
      best_ = a;
    }
    return value;
  }

  double best_value() const noexcept { return best_value_; }
  const std::vector<double>& best() const noexcept { return best_; }

  Allocation result(std::uint64_t seed) const {
    return {best_, best_value_, evaluations_, seed};
  }

 private:
  const Scenario& scenario_;
  std::vector<double> best_;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations_ = 0;
};

double total(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

std::vector<double> equal_split(const Scenario& sc) {
  std::vector<double> a(sc.size(), sc.total_bandwidth / static_cast<double>(sc.size()));
  project_feasible(a, sc);
  return a;
}

/// Starting point: the better of the equal split and, when available, the
/// baseline split. Both are evaluated through `search`.
std::vector<double> starting_point(const Scenario& sc, const MetaheuristicConfig& cfg,
                                   Search& search) {
  auto start = equal_split(sc);
  double value = search.evaluate(start);
  if (cfg.warm_start && sc.model.monotone()) {
    auto baseline = allocate_baseline(sc).a;
    const double bv = search.evaluate(baseline);
    if (bv < value) start = std::move(baseline);
  }
  return start;
}

// Slot n stands for unused bandwidth, so transfers can also release or
// claim budget.
Allocation anneal(const Scenario& sc, const MetaheuristicConfig& cfg, std::uint64_t seed) {
  const auto& p = cfg.annealing;
  Rng rng(seed);
  Search search(sc);
  auto current = starting_point(sc, cfg, search);
  double current_value = evaluate_objective(current, sc);

  const std::size_t n = sc.size();
  const double budget = sc.total_bandwidth;
  const double delta = p.step_fraction * budget;
  const double t0 = current_value;
  if (!(t0 > 0.0)) return search.result(seed);

  for (double temp = t0; temp >= p.stop_ratio * t0; temp *= p.cooling) {
    for (int it = 0; it < p.iterations_per_temperature; ++it) {
      const auto from = static_cast<std::size_t>(rng.below(n + 1));
      auto to = static_cast<std::size_t>(rng.below(n));
      if (to >= from) ++to;
      const double available = from == n ? budget - total(current) : current[from] - sc.a_min;
      const double amount = std::min(delta * rng.uniform(), std::max(available, 0.0));
      const double u = rng.uniform();
      if (amount <= 0.0) continue;

      auto candidate = current;
      if (from < n) candidate[from] -= amount;
      if (to < n) candidate[to] += amount;
      project_feasible(candidate, sc);
      const double value = search.evaluate(candidate);
      const double diff = value - current_value;
      if (diff <= 0.0 || u < std::exp(-diff / temp)) {
        current = std::move(candidate);
        current_value = value;
      }
    }
  }
  return search.result(seed);
}

Allocation genetic(const Scenario& sc, const MetaheuristicConfig& cfg, std::uint64_t seed) {
  const auto& p = cfg.genetic;
  Rng rng(seed);
  Search search(sc);
  const std::size_t n = sc.size();
  const double budget = sc.total_bandwidth;
  const double room = budget - static_cast<double>(n) * sc.a_min;

  struct Individual {
    std::vector<double> genes;
    double fitness;
  };
  std::vector<Individual> population;
  population.reserve(static_cast<std::size_t>(p.population));
  {
    auto start = starting_point(sc, cfg, search);
    population.push_back({start, evaluate_objective(start, sc)});
    auto eq = equal_split(sc);
    population.push_back({eq, evaluate_objective(eq, sc)});
  }
  // Simplex vertices: optima often give one customer the whole budget.
  for (std::size_t i = 0; i < n && population.size() < static_cast<std::size_t>(p.population); ++i) {
    std::vector<double> genes(n, sc.a_min);
    genes[i] = budget - static_cast<double>(n - 1) * sc.a_min;
    project_feasible(genes, sc);
    const double f = search.evaluate(genes);
    population.push_back({std::move(genes), f});
  }
  // Random points of the simplex including the unused-bandwidth slot.
  while (population.size() < static_cast<std::size_t>(p.population)) {
    std::vector<double> w(n + 1);
    for (auto& v : w) v = -std::log(1.0 - rng.uniform());
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> genes(n);
    for (std::size_t i = 0; i < n; ++i) genes[i] = sc.a_min + room * w[i] / s;
    project_feasible(genes, sc);
    const double f = search.evaluate(genes);
    population.push_back({std::move(genes), f});
  }

  auto tournament = [&]() -> const Individual& {
    const auto& a = population[rng.below(population.size())];
    const auto& b = population[rng.below(population.size())];
    return b.fitness < a.fitness ? b : a;
  };

  for (int gen = 0; gen < p.generations; ++gen) {
    std::vector<std::size_t> idx(population.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return population[a].fitness < population[b].fitness;
    });

    std::vector<Individual> next;
    next.reserve(population.size());
    for (int e = 0; e < p.elitism; ++e) next.push_back(population[idx[static_cast<std::size_t>(e)]]);

    while (next.size() < population.size()) {
      const auto& pa = tournament();
      const auto& pb = tournament();
      std::vector<double> child(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double lo = std::min(pa.genes[i], pb.genes[i]);
        const double hi = std::max(pa.genes[i], pb.genes[i]);
        const double span = hi - lo;
        child[i] = rng.uniform(lo - p.blend_alpha * span, hi + p.blend_alpha * span);
        if (rng.uniform() < p.mutation_rate) {
          child[i] += rng.normal(0.0, p.mutation_sd_fraction * budget);
        }
      }
      project_feasible(child, sc);
      const double f = search.evaluate(child);
      next.push_back({std::move(child), f});
    }
    population = std::move(next);
  }
  return search.result(seed);
}

// Off-lattice polish of the best point: best-improvement pair transfers
// (slack slot included) with a step halved whenever no transfer helps.
void refine(const Scenario& sc, double step, Search& search) {
  const std::size_t n = sc.size();
  auto current = search.best();
  double value = search.best_value();
  const double floor_step = 1e-9 * sc.total_bandwidth;
  while (step > floor_step) {
    std::vector<double> best_candidate;
    double best_value = value;
    for (std::size_t from = 0; from <= n; ++from) {
      for (std::size_t to = 0; to <= n; ++to) {
        if (to == from) continue;
        const double available = from == n ? sc.total_bandwidth - total(current) : current[from] - sc.a_min;
        const double amount = std::min(step, available);
        if (!(amount > 0.0)) continue;
        auto candidate = current;
        if (from < n) candidate[from] -= amount;
        if (to < n) candidate[to] += amount;
        project_feasible(candidate, sc);
        const double v = search.evaluate(candidate);
        if (v < best_value) {
          best_value = v;
          best_candidate = std::move(candidate);
        }
      }
    }
    if (best_candidate.empty()) {
      step /= 2.0;
    } else {
      current = std::move(best_candidate);
      value = best_value;
    }
  }
}

Allocation tabu(const Scenario& sc, const MetaheuristicConfig& cfg, std::uint64_t seed) {
  const auto& p = cfg.tabu;
  Search search(sc);
  const std::size_t n = sc.size();
  const std::size_t slots = n + 1;
  const double unit = (sc.total_bandwidth - static_cast<double>(n) * sc.a_min) / p.steps;

  auto to_vector = [&](const std::vector<int>& units) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = sc.a_min + units[i] * unit;
    project_feasible(a, sc);
    return a;
  };

  // Discretize the starting point; the remainder goes to the slack slot.
  const auto start = starting_point(sc, cfg, search);
  std::vector<int> units(slots, 0);
  int used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    units[i] = unit > 0.0 ? std::clamp(static_cast<int>(std::floor((start[i] - sc.a_min) / unit)),
                                       0, p.steps - used)
                          : 0;
    used += units[i];
  }
  units[n] = p.steps - used;

  double tabu_best = search.evaluate(to_vector(units));
  // tabu_until[from][to]: move from→to is forbidden while iteration < value.
  std::vector<int> tabu_until(slots * slots, 0);

  for (int iter = 0; iter < p.iterations; ++iter) {
    std::optional<std::pair<std::size_t, std::size_t>> chosen, fallback;
    double chosen_value = std::numeric_limits<double>::infinity();
    double fallback_value = chosen_value;
    for (std::size_t from = 0; from < slots; ++from) {
      if (units[from] == 0) continue;
      for (std::size_t to = 0; to < slots; ++to) {
        if (to == from) continue;
        --units[from];
        ++units[to];
        const double value = search.evaluate(to_vector(units));
        ++units[from];
        --units[to];
        const bool is_tabu = iter < tabu_until[from * slots + to];
        if (is_tabu && !(value < tabu_best)) {
          if (value < fallback_value) {
            fallback_value = value;
            fallback = {from, to};
          }
          continue;
        }
        if (value < chosen_value) {
          chosen_value = value;
          chosen = {from, to};
        }
      }
    }
    // Few customers means few moves; when all are tabu take the best one.
    if (!chosen) {
      chosen = fallback;
      chosen_value = fallback_value;
    }
    if (!chosen) break;
    const auto [from, to] = *chosen;
    --units[from];
    ++units[to];
    tabu_best = std::min(tabu_best, chosen_value);
    tabu_until[to * slots + from] = iter + 1 + p.tenure;
  }
  refine(sc, unit / 2.0, search);
  return search.result(seed);
}

}  // namespace

Allocation allocate_metaheuristic(const Scenario& scenario, Strategy strategy,
                                  const MetaheuristicConfig& config, std::uint64_t seed) {
  scenario.validate();
  config.validate();
  switch (strategy) {
    case Strategy::SimulatedAnnealing: return anneal(scenario, config, seed);
    case Strategy::Genetic: return genetic(scenario, config, seed);
    case Strategy::Tabu: return tabu(scenario, config, seed);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace crowdshare::allocator
