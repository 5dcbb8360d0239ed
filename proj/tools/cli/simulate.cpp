// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "crowdshare/codec.hpp"
#include "crowdshare/imaging.hpp"
#include "crowdshare/ranking.hpp"
#include "crowdshare/saliency.hpp"
#include "json.hpp"

namespace crowdshare::cli {
namespace {

satisfaction::SatisfactionModel load_model(const ModelConfig& m) {
  if (m.kind == satisfaction::ModelKind::Parametric) {
    return satisfaction::SatisfactionModel::parametric(m.parametric);
  }
  if (!m.model_path.empty()) {
    std::ifstream in(m.model_path);
    if (!in) throw std::runtime_error("cannot open model: " + m.model_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return satisfaction::model_from_json(ss.str());
  }
  return satisfaction::train_satisfaction(satisfaction::read_survey_csv(m.survey_csv_path), m.k);
}

struct Measured {
  double file_bits = 0.0;
  double scm = 1.0;
};

Measured measure_image(const CustomerConfig& c, std::ostream* log) {
  const auto image = imaging::read_image_file(c.image_path);
  saliency::SaliencyAnnotation ann;
  if (!c.annotations_path.empty()) ann = saliency::read_annotation_file(c.annotations_path);
  ann.validate(image.width, image.height);

  Measured out;
  codec::EncoderConfig enc;
  enc.levels = c.levels;
  enc.budget_fraction = c.budget;
  if (!ann.boxes.empty()) {
    ranking::ObjectRanking rank;
    if (!c.repository_manifest.empty()) {
      rank = ranking::rank_objects(image, ann, ranking::load_repository_manifest(c.repository_manifest));
    } else {
      rank = ranking::rank_from_similarities(ann.labels(), {}, {});
    }
    const int p = static_cast<int>(rank.object_count());
    const int q = c.q.value_or(p);
    if (q > p) {
      throw std::invalid_argument("customer '" + c.id + "': q=" + std::to_string(q) +
                                  " exceeds the " + std::to_string(p) + " annotated objects");
    }
    enc.selected_labels = rank.top(static_cast<std::size_t>(q));
    out.scm = ranking::scm(q, p);
    if (log) {
      *log << "customer " << c.id << ": ranked";
      for (const auto& l : rank.ranked_labels) *log << ' ' << l;
      *log << ", sending top " << q << '\n';
    }
  } else if (c.q) {
    throw std::invalid_argument("customer '" + c.id + "': q given but the image has no annotations");
  } else if (c.scm) {
    out.scm = *c.scm;
  }
  const auto bytes = codec::serialize_bitstream(codec::encode_image(image, ann, enc));
  out.file_bits = 8.0 * static_cast<double>(bytes.size());
  if (log) *log << "customer " << c.id << ": encoded " << bytes.size() << " bytes\n";
  return out;
}

double dissatisfaction(allocator::Objective o, double us, double tau) {
  return o == allocator::Objective::TotalOneSided ? std::max(tau - us, 0.0) : std::abs(us - tau);
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

allocator::Scenario build_scenario(const ScenarioConfig& config, std::ostream* log) {
  allocator::Scenario sc;
  sc.total_bandwidth = config.bandwidth_bits_per_s;
  sc.a_min = config.a_min;
  sc.objective = config.objective;
  sc.model = load_model(config.model);
  for (const auto& c : config.customers) {
    satisfaction::Customer cust;
    cust.id = c.id;
    cust.tau = c.tau;
    cust.quality.s_orig = c.s_orig;
    cust.quality.r_orig = c.r_orig;
    cust.quality.s_sent = c.s_sent;
    cust.quality.r_sent = c.r_sent;
    cust.quality.weights = c.weights;
    if (!c.image_path.empty()) {
      const auto m = measure_image(c, log);
      cust.file_bits = m.file_bits;
      cust.quality.scm = m.scm;
    } else {
      cust.file_bits = *c.file_bits;
      if (c.scm) {
        cust.quality.scm = *c.scm;
      } else if (c.q && c.p) {
        cust.quality.scm = ranking::scm(*c.q, *c.p);
      } else {
        cust.quality.scm = 1.0;
      }
    }
    sc.customers.push_back(std::move(cust));
  }
  sc.validate();
  return sc;
}

RunReport run_simulation(const ScenarioConfig& config, std::optional<std::uint64_t> seed,
                         std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  const auto sc = build_scenario(config, log);
  const std::uint64_t used_seed = seed.value_or(config.optimizer.seed);

  allocator::Allocation alloc;
  switch (config.optimizer.kind) {
    case OptimizerKind::Baseline: alloc = allocator::allocate_baseline(sc); break;
    case OptimizerKind::Bruteforce:
      alloc = allocator::allocate_bruteforce(sc, config.optimizer.grid_steps);
      break;
    case OptimizerKind::Metaheuristic:
      alloc = allocator::allocate_metaheuristic(sc, config.optimizer.strategy,
                                                config.optimizer.params, used_seed);
      break;
  }

  RunReport report;
  report.objective = sc.objective;
  report.bandwidth_bits_per_s = sc.total_bandwidth;
  report.objective_value = alloc.objective_value;
  report.evaluations = alloc.evaluations;
  report.seed = used_seed;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const auto& c = sc.customers[i];
    ReportRow row;
    row.customer_id = c.id;
    row.f_bits = c.file_bits;
    row.a_bits_per_s = alloc.a[i];
    row.delay_s = alloc.a[i] > 0.0 ? satisfaction::delay(c.file_bits, alloc.a[i])
                                   : std::numeric_limits<double>::infinity();
    row.iq = c.iq();
    row.scm = c.quality.scm;
    row.us = allocator::customer_satisfaction(sc, i, alloc.a[i]);
    row.tau = c.tau;
    row.dissatisfaction = dissatisfaction(sc.objective, row.us, row.tau);
    report.rows.push_back(row);
  }
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (log) {
    *log << "objective " << allocator::to_string(sc.objective) << " = " << fmt(report.objective_value)
         << " after " << report.evaluations << " evaluations (" << report.wall_ms << " ms)\n";
  }
  return report;
}

std::string report_to_csv(const RunReport& report) {
  std::string out = kReportHeader;
  out += '\n';
  for (const auto& r : report.rows) {
    out += r.customer_id;
    for (double v : {r.f_bits, r.a_bits_per_s, r.delay_s, r.iq, r.scm, r.us, r.tau, r.dissatisfaction}) {
      out += ',';
      out += fmt(v);
    }
    out += '\n';
  }
  return out;
}

std::string report_footer_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["objective"] = allocator::to_string(report.objective);
  j["objective_value"] = report.objective_value;
  j["evaluations"] = report.evaluations;
  j["wall_ms"] = report.wall_ms;
  j["seed"] = report.seed;
  return j.dump(2) + "\n";
}

std::string footer_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

void write_report(const RunReport& report, const std::string& csv_path) {
  double total = 0.0;
  for (const auto& r : report.rows) total += r.a_bits_per_s;
  if (total > report.bandwidth_bits_per_s) {
    throw std::logic_error("report allocation exceeds the bandwidth budget");
  }
  const std::string sidecar = footer_path(csv_path);
  if (sidecar == csv_path) throw std::invalid_argument("report path must not end in .json");
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
  };
  write(csv_path, report_to_csv(report));
  write(sidecar, report_footer_json(report));
}

}  // namespace crowdshare::cli
