// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace crowdshare::cli {
namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string msg = "scenario schema violations:";
  for (const auto& i : issues) msg += "\n  " + i;
  return msg;
}

// Collects every violation instead of stopping at the first.
class Checker {
 public:
  explicit Checker(std::string base_dir) : base_(std::move(base_dir)) {}

  void fail(const std::string& path, const std::string& what) { issues_.push_back(path + ": " + what); }
  const std::vector<std::string>& issues() const { return issues_; }

  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    if (obj.contains(key)) return &obj[key];
    if (required) fail(path + "." + key, "required");
    return nullptr;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key,
                               bool required, double lo, double hi, bool lo_open = false) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    const std::string p = path + "." + key;
    if (!v->is_number()) {
      fail(p, "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (lo_open && x == lo)) {
      std::ostringstream os;
      os << "value " << x << " outside " << (lo_open ? "(" : "[") << lo << ", " << hi << "]";
      fail(p, os.str());
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& path, const char* key,
                                      bool required, std::int64_t lo, std::int64_t hi) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    const std::string p = path + "." + key;
    if (!v->is_number_integer()) {
      fail(p, "expected an integer");
      return std::nullopt;
    }
    const auto x = v->get<std::int64_t>();
    if (x < lo || x > hi) {
      fail(p, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                    bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string() || v->get<std::string>().empty()) {
      fail(path + "." + key, "expected a non-empty string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::string> existing_path(const json& obj, const std::string& path,
                                           const char* key, bool required) {
    auto s = string(obj, path, key, required);
    if (!s) return std::nullopt;
    std::filesystem::path p(*s);
    if (p.is_relative()) p = std::filesystem::path(base_) / p;
    if (!std::filesystem::exists(p)) {
      fail(path + "." + key, "file not found: " + p.string());
      return std::nullopt;
    }
    return p.lexically_normal().string();
  }

  bool object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void no_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
    }
  }

 private:
  std::string base_;
  std::vector<std::string> issues_;
};

void parse_optimizer(Checker& ck, const json& o, OptimizerConfig& out) {
  const std::string path = "$.optimizer";
  if (!ck.object(o, path)) return;
  ck.no_unknown(o, path, {"strategy", "seed", "params"});
  if (auto s = ck.string(o, path, "strategy", true)) {
    if (*s == "baseline") {
      out.kind = OptimizerKind::Baseline;
    } else if (*s == "bruteforce") {
      out.kind = OptimizerKind::Bruteforce;
    } else {
      try {
        out.strategy = allocator::strategy_from_string(*s);
      } catch (const std::invalid_argument&) {
        ck.fail(path + ".strategy", "expected one of sa, ga, tabu, baseline, bruteforce");
      }
    }
  }
  if (auto seed = ck.integer(o, path, "seed", false, 0, std::numeric_limits<std::int64_t>::max())) {
    out.seed = static_cast<std::uint64_t>(*seed);
  }
  const json* params = ck.field(o, path, "params", false);
  if (!params) return;
  const std::string pp = path + ".params";
  if (!ck.object(*params, pp)) return;
  auto& m = out.params;
  ck.no_unknown(*params, pp,
                {"step_fraction", "cooling", "iterations_per_temperature", "stop_ratio", "population",
                 "generations", "elitism", "blend_alpha", "mutation_sd_fraction", "mutation_rate",
                 "steps", "tenure", "iterations", "warm_start", "grid_steps"});
  const json& P = *params;
  if (auto v = ck.number(P, pp, "step_fraction", false, 0.0, 1.0, true)) m.annealing.step_fraction = *v;
  if (auto v = ck.number(P, pp, "cooling", false, 0.0, 1.0, true)) m.annealing.cooling = *v;
  if (auto v = ck.integer(P, pp, "iterations_per_temperature", false, 1, 1000000)) {
    m.annealing.iterations_per_temperature = static_cast<int>(*v);
  }
  if (auto v = ck.number(P, pp, "stop_ratio", false, 0.0, 1.0, true)) m.annealing.stop_ratio = *v;
  if (auto v = ck.integer(P, pp, "population", false, 2, 100000)) m.genetic.population = static_cast<int>(*v);
  if (auto v = ck.integer(P, pp, "generations", false, 1, 1000000)) m.genetic.generations = static_cast<int>(*v);
  if (auto v = ck.integer(P, pp, "elitism", false, 0, 100000)) m.genetic.elitism = static_cast<int>(*v);
  if (auto v = ck.number(P, pp, "blend_alpha", false, 0.0, 10.0)) m.genetic.blend_alpha = *v;
  if (auto v = ck.number(P, pp, "mutation_sd_fraction", false, 0.0, 1.0)) m.genetic.mutation_sd_fraction = *v;
  if (auto v = ck.number(P, pp, "mutation_rate", false, 0.0, 1.0)) m.genetic.mutation_rate = *v;
  if (auto v = ck.integer(P, pp, "steps", false, 1, 1000000)) m.tabu.steps = static_cast<int>(*v);
  if (auto v = ck.integer(P, pp, "tenure", false, 0, 1000000)) m.tabu.tenure = static_cast<int>(*v);
  if (auto v = ck.integer(P, pp, "iterations", false, 1, 100000000)) m.tabu.iterations = static_cast<int>(*v);
  if (auto v = ck.integer(P, pp, "grid_steps", false, 1, allocator::kMaxBruteforceSteps)) {
    out.grid_steps = static_cast<int>(*v);
  }
  if (const json* w = ck.field(P, pp, "warm_start", false)) {
    if (w->is_boolean()) {
      m.warm_start = w->get<bool>();
    } else {
      ck.fail(pp + ".warm_start", "expected a boolean");
    }
  }
  if (m.genetic.elitism > m.genetic.population) ck.fail(pp + ".elitism", "exceeds population");
}

void parse_model(Checker& ck, const json& o, ModelConfig& out) {
  const std::string path = "$.model";
  if (!ck.object(o, path)) return;
  ck.no_unknown(o, path, {"kind", "params", "delta_half", "gamma", "survey_csv_path", "model_path", "k"});
  const auto kind = ck.string(o, path, "kind", true);
  if (!kind) return;
  if (*kind == "parametric") {
    out.kind = satisfaction::ModelKind::Parametric;
    const json* params = ck.field(o, path, "params", false);
    const json& src = params ? *params : o;
    const std::string sp = params ? path + ".params" : path;
    if (params && !ck.object(*params, sp)) return;
    if (auto v = ck.number(src, sp, "delta_half", false, 0.0, 1e9, true)) out.parametric.delta_half = *v;
    if (auto v = ck.number(src, sp, "gamma", false, 0.0, 100.0, true)) out.parametric.gamma = *v;
  } else if (*kind == "knn") {
    out.kind = satisfaction::ModelKind::LearnedKnn;
    const bool has_survey = o.contains("survey_csv_path");
    const bool has_model = o.contains("model_path");
    if (has_survey == has_model) {
      ck.fail(path, "knn needs exactly one of survey_csv_path or model_path");
      return;
    }
    if (has_survey) {
      if (auto p = ck.existing_path(o, path, "survey_csv_path", true)) out.survey_csv_path = *p;
      if (auto k = ck.integer(o, path, "k", false, 1, 1000000)) out.k = static_cast<int>(*k);
    } else if (auto p = ck.existing_path(o, path, "model_path", true)) {
      out.model_path = *p;
    }
  } else {
    ck.fail(path + ".kind", "expected \"parametric\" or \"knn\"");
  }
}

void parse_customer(Checker& ck, const json& o, const std::string& path, CustomerConfig& c) {
  if (!ck.object(o, path)) return;
  ck.no_unknown(o, path,
                {"id", "tau", "image_path", "annotations_path", "repository_manifest", "q", "p", "scm",
                 "weights", "s_orig", "r_orig", "s_sent", "r_sent", "file_bits", "budget", "levels"});
  if (auto v = ck.string(o, path, "id", true)) c.id = *v;
  if (auto v = ck.number(o, path, "tau", true, 0.0, 1.0)) c.tau = *v;
  if (auto v = ck.number(o, path, "s_orig", true, 0.0, 1e18, true)) c.s_orig = *v;
  if (auto v = ck.number(o, path, "r_orig", true, 0.0, 1e18, true)) c.r_orig = *v;
  if (auto v = ck.number(o, path, "s_sent", true, 0.0, 1e18, true)) c.s_sent = *v;
  if (auto v = ck.number(o, path, "r_sent", true, 0.0, 1e18, true)) c.r_sent = *v;
  if (c.s_sent > c.s_orig) ck.fail(path + ".s_sent", "exceeds s_orig");
  if (c.r_sent > c.r_orig) ck.fail(path + ".r_sent", "exceeds r_orig");

  if (const json* w = ck.field(o, path, "weights", true)) {
    if (!w->is_array() || w->size() != 3) {
      ck.fail(path + ".weights", "expected an array of three numbers");
    } else {
      double total = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& x = (*w)[i];
        if (!x.is_number() || x.get<double>() < 0.0) {
          ck.fail(path + ".weights[" + std::to_string(i) + "]", "expected a non-negative number");
          continue;
        }
        c.weights[i] = x.get<double>();
        total += c.weights[i];
      }
      if (std::abs(total - 1.0) > 1e-9) ck.fail(path + ".weights", "must sum to 1");
    }
  }

  const bool has_image = o.contains("image_path");
  const bool has_bits = o.contains("file_bits");
  if (has_image == has_bits) {
    ck.fail(path, "exactly one of image_path or file_bits is required");
  }
  if (has_image) {
    if (auto p = ck.existing_path(o, path, "image_path", true)) c.image_path = *p;
  }
  if (has_bits) c.file_bits = ck.number(o, path, "file_bits", true, 0.0, 1e18, true);
  if (auto p = ck.existing_path(o, path, "annotations_path", false)) c.annotations_path = *p;
  if (auto p = ck.existing_path(o, path, "repository_manifest", false)) c.repository_manifest = *p;
  if (o.contains("annotations_path") && !has_image) {
    ck.fail(path + ".annotations_path", "only meaningful together with image_path");
  }
  if (o.contains("repository_manifest") && !o.contains("annotations_path")) {
    ck.fail(path + ".repository_manifest", "requires annotations_path");
  }
  if (auto v = ck.integer(o, path, "q", false, 1, 65535)) c.q = static_cast<int>(*v);
  if (auto v = ck.integer(o, path, "p", false, 1, 65535)) c.p = static_cast<int>(*v);
  if (auto v = ck.number(o, path, "scm", false, 0.0, 1.0)) c.scm = *v;
  if (c.q && c.p && *c.q > *c.p) ck.fail(path + ".q", "exceeds p");
  if (o.contains("p") && o.contains("annotations_path")) {
    ck.fail(path + ".p", "object count comes from annotations_path");
  }
  if (o.contains("scm") && (o.contains("q") || o.contains("annotations_path"))) {
    ck.fail(path + ".scm", "give either scm or q with an object count, not both");
  }
  if (o.contains("p") && !o.contains("q")) ck.fail(path + ".q", "required when p is given");
  if (auto v = ck.number(o, path, "budget", false, 0.0, 1.0, true)) c.budget = *v;
  if (auto v = ck.integer(o, path, "levels", false, 1, 16)) c.levels = static_cast<int>(*v);
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError({std::string("$: invalid JSON: ") + e.what()});
  }
  Checker ck(base_dir);
  ScenarioConfig sc;
  if (!ck.object(doc, "$")) throw SchemaError(ck.issues());
  ck.no_unknown(doc, "$",
                {"bandwidth_bits_per_s", "a_min", "objective", "optimizer", "model", "customers"});

  if (auto v = ck.number(doc, "$", "bandwidth_bits_per_s", true, 0.0, 1e18, true)) {
    sc.bandwidth_bits_per_s = *v;
  }
  if (auto v = ck.number(doc, "$", "a_min", false, 0.0, 1e18)) sc.a_min = *v;
  if (auto v = ck.string(doc, "$", "objective", true)) {
    try {
      sc.objective = allocator::objective_from_string(*v);
    } catch (const std::invalid_argument&) {
      ck.fail("$.objective", "expected one of total_abs, max_abs, total_one_sided");
    }
  }
  if (const json* o = ck.field(doc, "$", "optimizer", true)) parse_optimizer(ck, *o, sc.optimizer);
  if (const json* m = ck.field(doc, "$", "model", true)) parse_model(ck, *m, sc.model);

  if (const json* cs = ck.field(doc, "$", "customers", true)) {
    if (!cs->is_array() || cs->empty()) {
      ck.fail("$.customers", "expected a non-empty array");
    } else {
      std::set<std::string> ids;
      for (std::size_t i = 0; i < cs->size(); ++i) {
        const std::string path = "$.customers[" + std::to_string(i) + "]";
        CustomerConfig c;
        parse_customer(ck, (*cs)[i], path, c);
        if (!c.id.empty() && !ids.insert(c.id).second) ck.fail(path + ".id", "duplicate id");
        sc.customers.push_back(std::move(c));
      }
    }
  }
  if (sc.customers.size() * sc.a_min > sc.bandwidth_bits_per_s && sc.bandwidth_bits_per_s > 0.0) {
    ck.fail("$.a_min", "customers x a_min exceeds bandwidth_bits_per_s");
  }
  if (sc.optimizer.kind == OptimizerKind::Bruteforce &&
      sc.customers.size() > static_cast<std::size_t>(allocator::kMaxBruteforceCustomers)) {
    ck.fail("$.optimizer.strategy", "bruteforce handles at most 3 customers");
  }
  if (sc.optimizer.kind == OptimizerKind::Baseline &&
      sc.model.kind != satisfaction::ModelKind::Parametric) {
    ck.fail("$.optimizer.strategy", "baseline needs a parametric model");
  }
  if (!ck.issues().empty()) throw SchemaError(ck.issues());
  return sc;
}

ScenarioConfig read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace crowdshare::cli
