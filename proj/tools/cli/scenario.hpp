// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdshare/allocator.hpp"
#include "crowdshare/satisfaction.hpp"

namespace crowdshare::cli {

/// Schema violations, one message per offending JSON path.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class OptimizerKind { Metaheuristic, Baseline, Bruteforce };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Metaheuristic;
  allocator::Strategy strategy = allocator::Strategy::SimulatedAnnealing;
  allocator::MetaheuristicConfig params;
  int grid_steps = 41;  // bruteforce only
  std::uint64_t seed = 0;
};

struct ModelConfig {
  satisfaction::ModelKind kind = satisfaction::ModelKind::Parametric;
  satisfaction::ParametricParams parametric;
  std::string survey_csv_path;  // resolved; knn trained from this
  std::string model_path;       // resolved; or loaded from model JSON
  int k = 5;
};

struct CustomerConfig {
  std::string id;
  double tau = 0.0;
  std::string image_path;        // resolved, empty when file_bits is given
  std::string annotations_path;  // resolved, optional
  std::string repository_manifest;
  std::optional<int> q;
  std::optional<int> p;
  std::optional<double> scm;
  std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double s_orig = 1.0;
  double r_orig = 1.0;
  double s_sent = 1.0;
  double r_sent = 1.0;
  std::optional<double> file_bits;
  double budget = 1.0;
  int levels = 3;
};

struct ScenarioConfig {
  double bandwidth_bits_per_s = 0.0;
  double a_min = 0.0;
  allocator::Objective objective = allocator::Objective::TotalAbs;
  OptimizerConfig optimizer;
  ModelConfig model;
  std::vector<CustomerConfig> customers;
};

/// Validates the whole document and throws SchemaError listing every
/// problem. Relative paths resolve against `base_dir`.
ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir);
ScenarioConfig read_scenario_file(const std::string& path);

}  // namespace crowdshare::cli
