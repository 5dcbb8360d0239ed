// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "crowdshare/rng.hpp"
#include "crowdshare/satisfaction.hpp"

namespace crowdshare::satisfaction {
namespace {

double generator_us(const ParametricParams& p, double iq, double d) {
  return iq / (1.0 + std::pow(d / p.delta_half, p.gamma));
}

TEST(Delay, Ratio) {
  EXPECT_DOUBLE_EQ(delay(8e6, 2e6), 4.0);
  EXPECT_THROW(delay(1.0, -1.0), std::invalid_argument);
}

TEST(ImageQuality, WeightedSum) {
  QualityInputs in;
  in.s_orig = 10;
  in.s_sent = 5;
  in.r_orig = 200;
  in.r_sent = 100;
  in.scm = 1.0;
  in.weights = {0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(image_quality(in), 0.2 * 0.5 + 0.3 * 0.5 + 0.5);
  in.weights = {0.2, 0.3, 0.6};
  EXPECT_THROW(image_quality(in), std::invalid_argument);
}

TEST(Parametric, HalfAtDeltaHalf) {
  const auto m = SatisfactionModel::parametric({3.0, 2.0});
  EXPECT_DOUBLE_EQ(m.predict(0.8, 0.0), 0.8);
  EXPECT_DOUBLE_EQ(m.predict(0.8, 3.0), 0.4);
  EXPECT_LT(m.predict(0.8, 6.0), m.predict(0.8, 5.0));
  EXPECT_THROW(m.predict(1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(m.predict(0.5, -1.0), std::invalid_argument);
}

TEST(Survey, GeneratorNoiselessMatchesFormula) {
  const ParametricParams gen{2.5, 1.5};
  const auto t = synthesize_survey(gen, 300, 0.0, 4);
  ASSERT_EQ(t.rows.size(), 300u);
  for (const auto& r : t.rows) {
    EXPECT_GE(r.iq, 0.0);
    EXPECT_LT(r.iq, 1.0);
    EXPECT_LT(r.delay_s, kDefaultDelayMax);
    EXPECT_DOUBLE_EQ(r.us, generator_us(gen, r.iq, r.delay_s));
  }
  const auto again = synthesize_survey(gen, 300, 0.0, 4);
  EXPECT_EQ(again.rows, t.rows);
}

TEST(Survey, NoisyStaysInRange) {
  const auto t = synthesize_survey({}, 500, 0.2, 9);
  for (const auto& r : t.rows) {
    EXPECT_GE(r.us, 0.0);
    EXPECT_LE(r.us, 1.0);
  }
}

TEST(Survey, CsvRoundTrip) {
  const auto t = synthesize_survey({}, 50, 0.05, 1);
  const auto csv = survey_to_csv(t);
  EXPECT_EQ(csv.rfind("iq,delay_s,us\n", 0), 0u);
  EXPECT_EQ(survey_from_csv(csv).rows, t.rows);
  EXPECT_ANY_THROW(survey_from_csv("iq,delay_s,us\n0.5,abc,0.2\n"));
  EXPECT_ANY_THROW(survey_from_csv("a,b,c\n0.5,1,0.2\n"));
  EXPECT_ANY_THROW(survey_from_csv("iq,delay_s,us\n1.5,1,0.2\n"));
}

TEST(Knn, KOneReproducesTraining) {
  const auto t = synthesize_survey({}, 200, 0.1, 2);
  const auto m = train_satisfaction(t, 1);
  for (const auto& r : t.rows) EXPECT_DOUBLE_EQ(m.predict(r.iq, r.delay_s), r.us);
}

TEST(Knn, ExactMatchWinsForLargerK) {
  const auto t = synthesize_survey({}, 200, 0.1, 3);
  const auto m = train_satisfaction(t, 5);
  for (const auto& r : t.rows) EXPECT_DOUBLE_EQ(m.predict(r.iq, r.delay_s), r.us);
}

TEST(Knn, LearnsGeneratorOnGrid) {
  const ParametricParams gen{};
  const auto m = train_satisfaction(synthesize_survey(gen, 500, 0.0, 17), 5);
  double se = 0.0;
  int n = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double iq = (i + 0.5) / 20.0;
      const double d = kDefaultDelayMax * (j + 0.5) / 20.0;
      const double e = m.predict(iq, d) - generator_us(gen, iq, d);
      se += e * e;
      ++n;
    }
  }
  EXPECT_LE(std::sqrt(se / n), 0.05);
}

TEST(Knn, RejectsBadK) {
  const auto t = synthesize_survey({}, 10, 0.0, 1);
  EXPECT_THROW(train_satisfaction(t, 0), std::invalid_argument);
  EXPECT_THROW(train_satisfaction(t, 11), std::invalid_argument);
  EXPECT_THROW(train_satisfaction({}, 1), std::invalid_argument);
}

TEST(ModelJson, RoundTrip) {
  const auto p = SatisfactionModel::parametric({2.0, 1.5});
  const auto p2 = model_from_json(model_to_json(p));
  EXPECT_EQ(p2.kind(), ModelKind::Parametric);
  EXPECT_DOUBLE_EQ(p2.predict(0.7, 4.0), p.predict(0.7, 4.0));

  const auto k = train_satisfaction(synthesize_survey({}, 100, 0.05, 8), 4);
  const auto k2 = model_from_json(model_to_json(k));
  EXPECT_EQ(k2.kind(), ModelKind::LearnedKnn);
  for (double d : {0.1, 3.3, 17.0}) EXPECT_DOUBLE_EQ(k2.predict(0.42, d), k.predict(0.42, d));
  EXPECT_ANY_THROW(model_from_json(R"({"kind":"other"})"));
}

Customer make_customer(double iq_target, double tau, double bits) {
  Customer c;
  c.id = "c";
  c.file_bits = bits;
  c.quality.weights = {0.0, 0.0, 1.0};
  c.quality.scm = iq_target;
  c.tau = tau;
  return c;
}

TEST(RequiredBandwidth, MatchesClosedFormGammaOne) {
  const ParametricParams p{3.0, 1.0};
  const auto model = SatisfactionModel::parametric(p);
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const double iq = rng.uniform(0.3, 1.0);
    const double tau = rng.uniform(0.05, 0.95) * iq;
    const double bits = rng.uniform(1e6, 5e7);
    const auto c = make_customer(iq, tau, bits);
    const double closed = bits / (p.delta_half * (iq / tau - 1.0));
    const auto got = required_bandwidth(c, model, 1e12);
    ASSERT_TRUE(got.has_value());
    EXPECT_LE(std::abs(*got - closed) / closed, 1e-5);
    // Certificate: the answer reaches tau, slightly less does not.
    EXPECT_GE(model.predict(iq, delay(bits, *got)), tau);
    EXPECT_LT(model.predict(iq, delay(bits, *got * (1.0 - 1e-5))), tau);
  }
}

TEST(RequiredBandwidth, UnreachableAndTrivial) {
  const auto model = SatisfactionModel::parametric({});
  EXPECT_FALSE(required_bandwidth(make_customer(0.5, 0.6, 1e6), model, 1e9).has_value());
  const auto zero = required_bandwidth(make_customer(0.5, 0.0, 1e6), model, 1e9);
  ASSERT_TRUE(zero.has_value());
  EXPECT_LE(*zero, 1e9 * kBandwidthFloorFraction);
  const auto learned = train_satisfaction(synthesize_survey({}, 10, 0.0, 1), 1);
  EXPECT_THROW(required_bandwidth(make_customer(0.5, 0.2, 1e6), learned, 1e9),
               std::invalid_argument);
}

}  // namespace
}  // namespace crowdshare::satisfaction
