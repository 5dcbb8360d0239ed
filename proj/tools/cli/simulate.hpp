// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crowdshare/allocator.hpp"
#include "scenario.hpp"

namespace crowdshare::cli {

struct ReportRow {
  std::string customer_id;
  double f_bits = 0.0;
  double a_bits_per_s = 0.0;
  double delay_s = 0.0;  // +inf when nothing is allocated
  double iq = 0.0;
  double scm = 0.0;
  double us = 0.0;
  double tau = 0.0;
  double dissatisfaction = 0.0;
};

struct RunReport {
  std::vector<ReportRow> rows;
  allocator::Objective objective = allocator::Objective::TotalAbs;
  double bandwidth_bits_per_s = 0.0;
  double objective_value = 0.0;
  std::uint64_t evaluations = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

/// Customer inputs after images are ranked and encoded.
allocator::Scenario build_scenario(const ScenarioConfig& config, std::ostream* log = nullptr);

/// Runs the configured optimizer. `seed` overrides the config's seed.
RunReport run_simulation(const ScenarioConfig& config, std::optional<std::uint64_t> seed,
                         std::ostream* log = nullptr);

constexpr const char* kReportHeader =
    "customer_id,F_bits,A_bits_per_s,delay_s,iq,scm,us,tau,dissatisfaction";

std::string report_to_csv(const RunReport& report);
std::string report_footer_json(const RunReport& report);
/// report.csv -> report.json next to it.
std::string footer_path(const std::string& csv_path);
/// Writes the CSV and its footer sidecar after rechecking the budget.
void write_report(const RunReport& report, const std::string& csv_path);

}  // namespace crowdshare::cli
