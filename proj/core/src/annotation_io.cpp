// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crowdshare/saliency.hpp"
#include "json.hpp"

namespace crowdshare::saliency {

using nlohmann::json;

SaliencyAnnotation parse_annotation_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("annotation JSON: ") + e.what());
  }
  if (!doc.is_array()) throw std::invalid_argument("annotation JSON must be an array of boxes");

  SaliencyAnnotation ann;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "annotation[" + std::to_string(i) + "]";
    if (!item.is_object()) throw std::invalid_argument(where + " must be an object");
    auto integer = [&](const char* key) {
      if (!item.contains(key) || !item[key].is_number_integer()) {
        throw std::invalid_argument(where + "." + key + " must be an integer");
      }
      return item[key].get<int>();
    };
    if (!item.contains("label") || !item["label"].is_string()) {
      throw std::invalid_argument(where + ".label must be a string");
    }
    SalientBox box;
    box.label = item["label"].get<std::string>();
    box.x = integer("x");
    box.y = integer("y");
    box.w = integer("w");
    box.h = integer("h");
    box.level = integer("level");
    ann.boxes.push_back(std::move(box));
  }
  return ann;
}

std::string annotation_to_json(const SaliencyAnnotation& annotation) {
  json doc = json::array();
  for (const auto& b : annotation.boxes) {
    doc.push_back({{"label", b.label}, {"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h},
                   {"level", b.level}});
  }
  return doc.dump(2);
}

SaliencyAnnotation read_annotation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open annotation file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_annotation_json(ss.str());
}

}  // namespace crowdshare::saliency
