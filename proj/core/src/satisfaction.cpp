// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/satisfaction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "crowdshare/rng.hpp"

namespace crowdshare::satisfaction {

double delay(double file_bits, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("delay: bandwidth must be positive");
  if (file_bits < 0.0) throw std::invalid_argument("delay: file size must be non-negative");
  return file_bits / bandwidth;
}

void QualityInputs::validate() const {
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("quality weights must be non-negative");
  }
  if (std::abs(weights[0] + weights[1] + weights[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("quality weights must sum to 1");
  }
  if (!(s_sent > 0.0) || !(r_sent > 0.0) || !(s_orig > 0.0) || !(r_orig > 0.0)) {
    throw std::invalid_argument("image sizes and resolutions must be positive");
  }
  if (s_sent > s_orig || r_sent > r_orig) {
    throw std::invalid_argument("transmitted size/resolution cannot exceed the original");
  }
  if (!(scm > 0.0) || scm > 1.0) throw std::invalid_argument("scm must lie in (0, 1]");
}

double image_quality(const QualityInputs& in) {
  in.validate();
  return in.weights[0] * (in.s_sent / in.s_orig) + in.weights[1] * (in.r_sent / in.r_orig) +
         in.weights[2] * in.scm;
}

void SurveyTable::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.iq >= 0.0 && r.iq <= 1.0) || !(r.delay_s >= 0.0) || !(r.us >= 0.0 && r.us <= 1.0) ||
        !std::isfinite(r.delay_s)) {
      throw std::invalid_argument("survey row " + std::to_string(i) + " out of range");
    }
  }
}

void ParametricParams::validate() const {
  if (!(delta_half > 0.0) || !(gamma > 0.0) || !std::isfinite(delta_half) || !std::isfinite(gamma)) {
    throw std::invalid_argument("parametric model needs delta_half > 0 and gamma > 0");
  }
}

SatisfactionModel SatisfactionModel::parametric(ParametricParams params) {
  params.validate();
  SatisfactionModel m;
  m.impl_ = params;
  return m;
}

SatisfactionModel SatisfactionModel::learned(KnnModel model) {
  if (model.rows.empty()) throw std::invalid_argument("k-NN model needs training rows");
  if (model.k < 1 || static_cast<std::size_t>(model.k) > model.rows.size()) {
    throw std::invalid_argument("k must lie in [1, rows]");
  }
  SatisfactionModel m;
  m.impl_ = std::move(model);
  return m;
}

ModelKind SatisfactionModel::kind() const noexcept {
  return std::holds_alternative<ParametricParams>(impl_) ? ModelKind::Parametric
                                                         : ModelKind::LearnedKnn;
}

const ParametricParams& SatisfactionModel::parametric_params() const {
  return std::get<ParametricParams>(impl_);
}

const KnnModel& SatisfactionModel::knn() const { return std::get<KnnModel>(impl_); }

namespace {

double parametric_us(const ParametricParams& p, double iq, double delay_s) {
  const double us = iq / (1.0 + std::pow(delay_s / p.delta_half, p.gamma));
  return std::clamp(us, 0.0, 1.0);
}

double knn_us(const KnnModel& m, double iq, double delay_s) {
  const double qx = (iq - m.mean[0]) / m.scale[0];
  const double qy = (delay_s - m.mean[1]) / m.scale[1];

  std::vector<std::pair<double, std::size_t>> dist(m.rows.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const double dx = (m.rows[i].iq - m.mean[0]) / m.scale[0] - qx;
    const double dy = (m.rows[i].delay_s - m.mean[1]) / m.scale[1] - qy;
    dist[i] = {std::hypot(dx, dy), i};
  }
  const auto k = static_cast<std::size_t>(m.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  if (dist.front().first == 0.0) return m.rows[dist.front().second].us;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double w = 1.0 / dist[j].first;
    num += w * m.rows[dist[j].second].us;
    den += w;
  }
  return std::clamp(num / den, 0.0, 1.0);
}

// Radical inverse in the given base.
double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

double SatisfactionModel::predict(double iq, double delay_s) const {
  if (!(iq >= 0.0 && iq <= 1.0)) throw std::invalid_argument("predict: iq must lie in [0, 1]");
  if (!(delay_s >= 0.0)) throw std::invalid_argument("predict: delay must be non-negative");
  if (const auto* p = std::get_if<ParametricParams>(&impl_)) return parametric_us(*p, iq, delay_s);
  return knn_us(std::get<KnnModel>(impl_), iq, delay_s);
}

SurveyTable synthesize_survey(const ParametricParams& generator, int n_rows, double noise_sd,
                              std::uint64_t seed, double delay_max) {
  generator.validate();
  if (n_rows < 1) throw std::invalid_argument("survey needs at least one row");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise_sd must be non-negative");
  if (!(delay_max > 0.0)) throw std::invalid_argument("delay_max must be positive");

  Rng rng(seed);
  const double shift_iq = rng.uniform();
  const double shift_delay = rng.uniform();
  SurveyTable table;
  table.rows.reserve(static_cast<std::size_t>(n_rows));
  for (int i = 0; i < n_rows; ++i) {
    const auto index = static_cast<std::uint64_t>(i) + 1;
    SurveyRow row;
    row.iq = frac(halton(index, 2) + shift_iq);
    row.delay_s = delay_max * frac(halton(index, 3) + shift_delay);
    row.us = parametric_us(generator, row.iq, row.delay_s);
    if (noise_sd > 0.0) row.us = std::clamp(row.us + rng.normal(0.0, noise_sd), 0.0, 1.0);
    table.rows.push_back(row);
  }
  return table;
}

SatisfactionModel train_satisfaction(const SurveyTable& table, int k) {
  if (table.rows.empty()) throw std::invalid_argument("cannot train on an empty survey table");
  table.validate();
  KnnModel m;
  m.k = k;
  m.rows = table.rows;
  const double n = static_cast<double>(table.rows.size());
  for (int dim = 0; dim < 2; ++dim) {
    auto get = [dim](const SurveyRow& r) { return dim == 0 ? r.iq : r.delay_s; };
    double sum = 0.0;
    for (const auto& r : table.rows) sum += get(r);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : table.rows) ss += (get(r) - mean) * (get(r) - mean);
    const double sd = std::sqrt(ss / n);
    m.mean[static_cast<std::size_t>(dim)] = mean;
    m.scale[static_cast<std::size_t>(dim)] = sd > 0.0 ? sd : 1.0;
  }
  return SatisfactionModel::learned(std::move(m));
}

double predict_satisfaction(const SatisfactionModel& model, double iq, double delay_s) {
  return model.predict(iq, delay_s);
}

void Customer::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("customer '" + id + "': tau must lie in [0, 1]");
  if (!(file_bits > 0.0)) throw std::invalid_argument("customer '" + id + "': file size must be positive");
  quality.validate();
}

std::optional<double> required_bandwidth(const Customer& customer, const SatisfactionModel& model,
                                         double a_max) {
  if (!model.monotone()) {
    throw std::invalid_argument("required_bandwidth needs a model monotone in delay");
  }
  if (!(a_max > 0.0)) throw std::invalid_argument("required_bandwidth: a_max must be positive");
  const double iq = customer.iq();
  auto us_at = [&](double a) { return model.predict(iq, delay(customer.file_bits, a)); };

  double lo = kBandwidthFloorFraction * a_max;
  double hi = a_max;
  if (us_at(lo) >= customer.tau) return lo;
  if (us_at(hi) < customer.tau) return std::nullopt;
  // Invariant: us(lo) < tau <= us(hi).
  while (hi - lo > kBandwidthRelTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (us_at(mid) >= customer.tau) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace crowdshare::satisfaction
