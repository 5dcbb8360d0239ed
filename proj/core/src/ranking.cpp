// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace crowdshare::ranking {

namespace {

int orientation_bin(double gx, double gy) {
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  const int bin = static_cast<int>(theta / (std::numbers::pi / kOrientationBins));
  return std::clamp(bin, 0, kOrientationBins - 1);
}

}  // namespace

SpmDescriptor spm_describe(const imaging::RasterImage& image, int levels) {
  if (levels < 0) throw std::invalid_argument("pyramid levels must be >= 0");
  if (levels > kMaxPyramidLevels) throw std::invalid_argument("pyramid levels must be <= 4");
  image.validate();
  const Plane gray = imaging::luminance(image);
  const int w = gray.width();
  const int h = gray.height();

  SpmDescriptor d;
  d.levels = levels;
  for (int l = 0; l <= levels; ++l) {
    const std::size_t cells = std::size_t{1} << (2 * l);
    d.histograms.emplace_back(cells * kCellBins, 0.0);
  }

  for (int y = 0; y < h; ++y) {
    const int ym = std::max(y - 1, 0);
    const int yp = std::min(y + 1, h - 1);
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0);
      const int xp = std::min(x + 1, w - 1);
      const double gx = 0.5 * (gray.at(xp, y) - gray.at(xm, y));
      const double gy = 0.5 * (gray.at(x, yp) - gray.at(x, ym));
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      const int bin = orientation_bin(gx, gy);
      for (int l = 0; l <= levels; ++l) {
        const long side = 1L << l;
        const long cx = static_cast<long>(x) * side / w;
        const long cy = static_cast<long>(y) * side / h;
        const auto cell = static_cast<std::size_t>(cy * side + cx);
        d.histograms[static_cast<std::size_t>(l)][cell * kCellBins + static_cast<std::size_t>(bin)] += mag;
      }
    }
  }

  for (auto& hist : d.histograms) {
    const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
    if (total > 0.0) {
      for (auto& v : hist) v /= total;
    } else {
      const std::size_t cells = hist.size() / kCellBins;
      for (std::size_t c = 0; c < cells; ++c) {
        hist[c * kCellBins + kOrientationBins] = 1.0 / static_cast<double>(cells);
      }
    }
  }
  return d;
}

double spm_level_weight(int level, int levels) {
  if (level == 0) return 1.0 / std::ldexp(1.0, levels);
  return 1.0 / std::ldexp(1.0, levels - level + 1);
}

double spm_similarity(const SpmDescriptor& a, const SpmDescriptor& b) {
  if (a.levels != b.levels) throw std::invalid_argument("SPM descriptors have different levels");
  double total = 0.0;
  for (int l = 0; l <= a.levels; ++l) {
    const auto& ha = a.histograms[static_cast<std::size_t>(l)];
    const auto& hb = b.histograms[static_cast<std::size_t>(l)];
    double inter = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) inter += std::min(ha[i], hb[i]);
    total += spm_level_weight(l, a.levels) * inter;
  }
  return std::clamp(total, 0.0, 1.0);
}

double spm_similarity(const imaging::RasterImage& a, const imaging::RasterImage& b, int levels) {
  return spm_similarity(spm_describe(a, levels), spm_describe(b, levels));
}

void Repository::validate() const {
  for (const auto& e : entries) {
    for (const auto& label : e.labels) {
      if (label.empty()) throw std::invalid_argument("repository entry has an empty label");
    }
  }
}

Repository load_repository_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open repository manifest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("repository manifest: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw std::invalid_argument("repository manifest must be a JSON array");

  const auto base = std::filesystem::path(path).parent_path();
  Repository repo;
  repo.owner = std::filesystem::path(path).stem().string();
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "repository[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("image_path") || !item["image_path"].is_string()) {
      throw std::invalid_argument(where + ".image_path must be a string");
    }
    if (!item.contains("labels") || !item["labels"].is_array()) {
      throw std::invalid_argument(where + ".labels must be an array");
    }
    RepositoryEntry entry;
    entry.image_path = item["image_path"].get<std::string>();
    for (const auto& l : item["labels"]) {
      if (!l.is_string()) throw std::invalid_argument(where + ".labels must hold strings");
      entry.labels.push_back(l.get<std::string>());
    }
    std::filesystem::path p(entry.image_path);
    if (p.is_relative()) p = base / p;
    entry.image = imaging::read_image_file(p.string());
    repo.entries.push_back(std::move(entry));
  }
  repo.validate();
  return repo;
}

saliency::LabelSet ObjectRanking::top(std::size_t q) const {
  if (q > ranked_labels.size()) throw std::invalid_argument("q exceeds the object count");
  return saliency::LabelSet(ranked_labels.begin(), ranked_labels.begin() + static_cast<std::ptrdiff_t>(q));
}

ObjectRanking rank_from_similarities(const std::vector<std::string>& labels,
                                     const std::vector<std::vector<std::string>>& entry_labels,
                                     const std::vector<double>& entry_similarity) {
  if (labels.empty()) throw std::invalid_argument("ranking needs at least one object");
  if (entry_labels.size() != entry_similarity.size()) {
    throw std::invalid_argument("one similarity per repository entry required");
  }

  const std::size_t p = labels.size();
  std::vector<double> best(p, 0.0);
  std::vector<std::optional<std::size_t>> closest(p);
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t e = 0; e < entry_labels.size(); ++e) {
      const auto& el = entry_labels[e];
      if (std::find(el.begin(), el.end(), labels[k]) == el.end()) continue;
      if (!closest[k] || entry_similarity[e] > best[k]) {
        best[k] = entry_similarity[e];
        closest[k] = e;
      }
    }
  }

  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (closest[a].has_value() != closest[b].has_value()) return closest[a].has_value();
    return best[a] > best[b];
  });

  ObjectRanking ranking;
  for (auto k : idx) {
    ranking.ranked_labels.push_back(labels[k]);
    ranking.similarity.push_back(best[k]);
    ranking.closest_entry.push_back(closest[k]);
  }
  return ranking;
}

ObjectRanking rank_objects(const imaging::RasterImage& image,
                           const saliency::SaliencyAnnotation& annotation,
                           const Repository& repository, int levels) {
  if (annotation.boxes.empty()) throw std::invalid_argument("ranking needs at least one object");
  const auto query = spm_describe(image, levels);
  std::vector<std::vector<std::string>> entry_labels;
  std::vector<double> sims;
  for (const auto& e : repository.entries) {
    entry_labels.push_back(e.labels);
    sims.push_back(spm_similarity(query, spm_describe(e.image, levels)));
  }
  return rank_from_similarities(annotation.labels(), entry_labels, sims);
}

double scm(int q, int p) {
  if (p < 1) throw std::invalid_argument("scm: p must be >= 1");
  if (q < 1) throw std::invalid_argument("scm: q must be >= 1");
  if (q > p) throw std::invalid_argument("scm: q must not exceed p");
  return static_cast<double>(q) / static_cast<double>(p);
}

}  // namespace crowdshare::ranking
