// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdshare::allocator {

const char* to_string(Objective objective) noexcept {
  switch (objective) {
    case Objective::TotalAbs: return "total_abs";
    case Objective::MaxAbs: return "max_abs";
    case Objective::TotalOneSided: return "total_one_sided";
  }
  return "?";
}

Objective objective_from_string(const std::string& name) {
  if (name == "total_abs") return Objective::TotalAbs;
  if (name == "max_abs") return Objective::MaxAbs;
  if (name == "total_one_sided") return Objective::TotalOneSided;
  throw std::invalid_argument("unknown objective '" + name + "'");
}

void Scenario::validate() const {
  if (customers.empty()) throw std::invalid_argument("scenario needs at least one customer");
  if (!(total_bandwidth > 0.0) || !std::isfinite(total_bandwidth)) {
    throw std::invalid_argument("total bandwidth must be positive");
  }
  if (!(a_min >= 0.0)) throw std::invalid_argument("a_min must be non-negative");
  if (static_cast<double>(customers.size()) * a_min > total_bandwidth) {
    throw std::invalid_argument("n * a_min exceeds the total bandwidth");
  }
  for (const auto& c : customers) c.validate();
}

bool is_feasible(std::span<const double> a, const Scenario& scenario) {
  if (a.size() != scenario.size()) return false;
  double sum = 0.0;
  for (double v : a) {
    if (!(v >= scenario.a_min) || !std::isfinite(v)) return false;
    sum += v;
  }
  return sum <= scenario.total_bandwidth;
}

void project_feasible(std::vector<double>& a, const Scenario& scenario) {
  const double floor = scenario.a_min;
  const double budget = scenario.total_bandwidth;
  a.resize(scenario.size(), floor);
  for (auto& v : a) {
    if (!(v >= floor) || std::isnan(v)) v = floor;
    if (v > budget) v = budget;
  }

  auto total = [&] {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
  };

  double sum = total();
  if (sum > budget) {
    double above = 0.0;
    for (double v : a) above += v - floor;
    const double room = budget - static_cast<double>(a.size()) * floor;
    const double factor = above > 0.0 ? room / above : 0.0;
    for (auto& v : a) v = floor + (v - floor) * factor;
    sum = total();
  }
  // Trim the last few ulps of overshoot from the largest entry.
  while (sum > budget) {
    auto it = std::max_element(a.begin(), a.end());
    const double before = *it;
    double reduced = std::max(floor, before - (sum - budget));
    if (reduced == before) reduced = std::max(floor, std::nextafter(before, floor));
    if (reduced == before) break;  // everything sits at the floor
    *it = reduced;
    sum = total();
  }
}

double customer_satisfaction(const Scenario& scenario, std::size_t i, double a) {
  const auto& c = scenario.customers[i];
  if (!(a > 0.0)) return 0.0;
  return scenario.model.predict(c.iq(), satisfaction::delay(c.file_bits, a));
}

std::vector<double> satisfactions(std::span<const double> a, const Scenario& scenario) {
  std::vector<double> us(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) us[i] = customer_satisfaction(scenario, i, a[i]);
  return us;
}

double evaluate_objective(std::span<const double> a, const Scenario& scenario) {
  if (!is_feasible(a, scenario)) throw std::invalid_argument("allocation is infeasible");
  double total = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double us = customer_satisfaction(scenario, i, a[i]);
    const double tau = scenario.customers[i].tau;
    switch (scenario.objective) {
      case Objective::TotalAbs: total += std::abs(us - tau); break;
      case Objective::MaxAbs: worst = std::max(worst, std::abs(us - tau)); break;
      case Objective::TotalOneSided: total += std::max(tau - us, 0.0); break;
    }
  }
  return scenario.objective == Objective::MaxAbs ? worst : total;
}

Allocation allocate_bruteforce(const Scenario& scenario, int grid_steps) {
  scenario.validate();
  const int n = static_cast<int>(scenario.size());
  if (n > kMaxBruteforceCustomers) {
    throw std::invalid_argument("bruteforce supports at most 3 customers");
  }
  if (grid_steps < 1 || grid_steps > kMaxBruteforceSteps) {
    throw std::invalid_argument("bruteforce grid steps must lie in [1, 64]");
  }
  const double step = (scenario.total_bandwidth - n * scenario.a_min) / grid_steps;

  Allocation best;
  best.objective_value = std::numeric_limits<double>::infinity();
  std::vector<int> j(static_cast<std::size_t>(n), 0);
  std::vector<double> a(static_cast<std::size_t>(n));

  // Odometer over j in lexicographic order, pruned to sum(j) <= G.
  while (true) {
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = scenario.a_min + j[static_cast<std::size_t>(i)] * step;
    }
    project_feasible(a, scenario);
    const double value = evaluate_objective(a, scenario);
    ++best.evaluations;
    if (value < best.objective_value) {
      best.objective_value = value;
      best.a = a;
    }

    int pos = n - 1;
    while (pos >= 0) {
      auto& slot = j[static_cast<std::size_t>(pos)];
      ++slot;
      int used = 0;
      for (int v : j) used += v;
      if (used <= grid_steps) break;
      slot = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return best;
}

Allocation allocate_baseline(const Scenario& scenario) {
  scenario.validate();
  if (!scenario.model.monotone()) {
    throw std::invalid_argument("baseline allocation needs a parametric satisfaction model");
  }
  const double budget = scenario.total_bandwidth;
  const std::size_t n = scenario.size();
  std::vector<double> required(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto sa = satisfaction::required_bandwidth(scenario.customers[i], scenario.model, budget);
    required[i] = sa.value_or(budget);
    sum += required[i];
  }

  std::vector<double> a(n);
  if (sum <= budget) {
    const double share = (budget - sum) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = required[i] + share;
  } else {
    for (std::size_t i = 0; i < n; ++i) a[i] = budget * required[i] / sum;
  }
  project_feasible(a, scenario);

  Allocation out;
  out.a = std::move(a);
  out.objective_value = evaluate_objective(out.a, scenario);
  out.evaluations = 1;
  return out;
}

}  // namespace crowdshare::allocator
