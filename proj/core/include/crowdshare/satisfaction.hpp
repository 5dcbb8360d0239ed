// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crowdshare::satisfaction {

/// Seconds to push `file_bits` through `bandwidth` bits/s.
double delay(double file_bits, double bandwidth);

/// Inputs of the weighted image-quality score. Sizes and resolutions enter
/// as sent/original ratios, so an untouched image scores 1.
struct QualityInputs {
  double s_orig = 1.0;
  double r_orig = 1.0;
  double s_sent = 1.0;
  double r_sent = 1.0;
  double scm = 1.0;
  std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  void validate() const;
};

/// w1·(S_sent/S_orig) + w2·(R_sent/R_orig) + w3·SCM, in (0, 1].
double image_quality(const QualityInputs& inputs);

struct SurveyRow {
  double iq = 0.0;
  double delay_s = 0.0;
  double us = 0.0;

  friend bool operator==(const SurveyRow&, const SurveyRow&) = default;
};

struct SurveyTable {
  std::vector<SurveyRow> rows;

  void validate() const;
};

/// US = iq / (1 + (delay/delta_half)^gamma).
struct ParametricParams {
  double delta_half = 3.0;
  double gamma = 2.0;

  void validate() const;
};

/// Inverse-distance-weighted k-nearest-neighbour regressor over
/// standardized (iq, delay) features.
struct KnnModel {
  int k = 5;
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> scale{1.0, 1.0};
  std::vector<SurveyRow> rows;
};

enum class ModelKind { Parametric, LearnedKnn };

class SatisfactionModel {
 public:
  static SatisfactionModel parametric(ParametricParams params);
  static SatisfactionModel learned(KnnModel model);

  ModelKind kind() const noexcept;
  /// Only parametric models guarantee monotonicity in delay.
  bool monotone() const noexcept { return kind() == ModelKind::Parametric; }

  const ParametricParams& parametric_params() const;
  const KnnModel& knn() const;

  /// Satisfaction in [0, 1]. Throws std::invalid_argument unless
  /// iq in [0, 1] and delay >= 0.
  double predict(double iq, double delay_s) const;

 private:
  std::variant<ParametricParams, KnnModel> impl_;
};

constexpr double kDefaultDelayMax = 30.0;

/// Survey rows on a randomly shifted Halton grid over [0,1]×[0, delay_max]
/// with us = parametric formula + N(0, noise_sd), clamped to [0, 1].
SurveyTable synthesize_survey(const ParametricParams& generator, int n_rows, double noise_sd,
                              std::uint64_t seed, double delay_max = kDefaultDelayMax);

SatisfactionModel train_satisfaction(const SurveyTable& table, int k);

double predict_satisfaction(const SatisfactionModel& model, double iq, double delay_s);

/// One customer transmitting one image.
struct Customer {
  std::string id;
  double tau = 0.0;
  double file_bits = 0.0;
  QualityInputs quality;

  double iq() const { return image_quality(quality); }
  void validate() const;
};

/// Lower end of the bandwidth bisection, as a fraction of a_max.
constexpr double kBandwidthFloorFraction = 1e-12;
constexpr double kBandwidthRelTolerance = 1e-6;

/// Smallest bandwidth that lifts the customer to tau, by bisection on
/// (0, a_max]. nullopt when even a_max is not enough. Requires a model
/// that is monotone in delay.
std::optional<double> required_bandwidth(const Customer& customer, const SatisfactionModel& model,
                                         double a_max);

// CSV with header `iq,delay_s,us`.
std::string survey_to_csv(const SurveyTable& table);
SurveyTable survey_from_csv(const std::string& text);
SurveyTable read_survey_csv(const std::string& path);
void write_survey_csv(const std::string& path, const SurveyTable& table);

std::string model_to_json(const SatisfactionModel& model);
SatisfactionModel model_from_json(const std::string& text);

}  // namespace crowdshare::satisfaction
