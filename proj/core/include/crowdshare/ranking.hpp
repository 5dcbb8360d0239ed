// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crowdshare/imaging.hpp"
#include "crowdshare/saliency.hpp"

namespace crowdshare::ranking {

/// Orientation bins per cell; one extra bin carries the mass of levels
/// without any gradient so flat images still compare.
constexpr int kOrientationBins = 8;
constexpr int kCellBins = kOrientationBins + 1;
constexpr int kDefaultPyramidLevels = 2;
constexpr int kMaxPyramidLevels = 4;

/// Level-normalized gradient-orientation histograms on 2^l × 2^l grids.
struct SpmDescriptor {
  int levels = 0;
  /// histograms[l] has 4^l * kCellBins entries summing to 1.
  std::vector<std::vector<double>> histograms;
};

SpmDescriptor spm_describe(const imaging::RasterImage& image, int levels);

/// Pyramid-match weights: 1/2^L for level 0, 1/2^(L-l+1) for l >= 1.
double spm_level_weight(int level, int levels);

double spm_similarity(const SpmDescriptor& a, const SpmDescriptor& b);

/// Weighted histogram-intersection score in [0, 1]; symmetric; 1 for
/// identical images. Throws std::invalid_argument for levels < 0.
double spm_similarity(const imaging::RasterImage& a, const imaging::RasterImage& b,
                      int levels = kDefaultPyramidLevels);

struct RepositoryEntry {
  std::string image_path;
  imaging::RasterImage image;
  std::vector<std::string> labels;
};

/// Images a customer sent earlier, with the objects each contains.
struct Repository {
  std::string owner;
  std::vector<RepositoryEntry> entries;

  void validate() const;
};

/// Manifest: JSON array of {image_path, labels[]}; relative paths resolve
/// against the manifest's directory.
Repository load_repository_manifest(const std::string& path);

struct ObjectRanking {
  std::vector<std::string> ranked_labels;
  /// Similarity of each ranked label's closest repository image (0 when
  /// the label never occurs in the repository).
  std::vector<double> similarity;
  /// Index of that closest image in the repository, if any.
  std::vector<std::optional<std::size_t>> closest_entry;

  std::size_t object_count() const noexcept { return ranked_labels.size(); }

  /// The q highest-ranked labels.
  saliency::LabelSet top(std::size_t q) const;
};

/// Ranks `labels` given each repository entry's similarity to the image.
/// Labels are ordered by the similarity of their closest containing entry;
/// labels absent from every entry go last; ties keep input order.
ObjectRanking rank_from_similarities(const std::vector<std::string>& labels,
                                     const std::vector<std::vector<std::string>>& entry_labels,
                                     const std::vector<double>& entry_similarity);

ObjectRanking rank_objects(const imaging::RasterImage& image,
                           const saliency::SaliencyAnnotation& annotation,
                           const Repository& repository, int levels = kDefaultPyramidLevels);

/// Saliency concordance metric q/p; requires 1 <= q <= p.
double scm(int q, int p);

}  // namespace crowdshare::ranking
