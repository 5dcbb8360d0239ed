// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crowdshare/satisfaction.hpp"
#include "json.hpp"

namespace crowdshare::satisfaction {

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("survey CSV line " + std::to_string(line) + ": bad number '" +
                                field + "'");
  }
}

}  // namespace

std::string survey_to_csv(const SurveyTable& table) {
  std::string out = "iq,delay_s,us\n";
  for (const auto& r : table.rows) {
    out += format_real(r.iq) + "," + format_real(r.delay_s) + "," + format_real(r.us) + "\n";
  }
  return out;
}

SurveyTable survey_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("survey CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "iq,delay_s,us") {
    throw std::invalid_argument("survey CSV header must be 'iq,delay_s,us'");
  }
  SurveyTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c, extra;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, c, ',') || std::getline(fields, extra, ',')) {
      throw std::invalid_argument("survey CSV line " + std::to_string(lineno) +
                                  ": expected 3 fields");
    }
    table.rows.push_back({parse_real(a, lineno), parse_real(b, lineno), parse_real(c, lineno)});
  }
  table.validate();
  return table;
}

SurveyTable read_survey_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open survey CSV: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return survey_from_csv(ss.str());
}

void write_survey_csv(const std::string& path, const SurveyTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write survey CSV: " + path);
  out << survey_to_csv(table);
}

std::string model_to_json(const SatisfactionModel& model) {
  nlohmann::json doc;
  if (model.kind() == ModelKind::Parametric) {
    const auto& p = model.parametric_params();
    doc = {{"kind", "parametric"}, {"delta_half", p.delta_half}, {"gamma", p.gamma}};
  } else {
    const auto& m = model.knn();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : m.rows) rows.push_back({r.iq, r.delay_s, r.us});
    doc = {{"kind", "knn"}, {"k", m.k}, {"mean", m.mean}, {"scale", m.scale}, {"rows", rows}};
  }
  return doc.dump(2);
}

SatisfactionModel model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "parametric") {
      return SatisfactionModel::parametric(
          {doc.at("delta_half").get<double>(), doc.at("gamma").get<double>()});
    }
    if (kind == "knn") {
      KnnModel m;
      m.k = doc.at("k").get<int>();
      m.mean = doc.at("mean").get<std::array<double, 2>>();
      m.scale = doc.at("scale").get<std::array<double, 2>>();
      for (const auto& r : doc.at("rows")) {
        m.rows.push_back({r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()});
      }
      SurveyTable{m.rows}.validate();
      return SatisfactionModel::learned(std::move(m));
    }
    throw std::invalid_argument("model JSON: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

}  // namespace crowdshare::satisfaction
