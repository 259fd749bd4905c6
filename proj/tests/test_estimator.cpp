#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "zotab/estimator.hpp"
#include "zotab/fixtures.hpp"

using namespace zotab;

namespace {

WeightStream stream_of(std::initializer_list<double> ys) {
  WeightStream ws;
  for (double y : ys) ws.log_y.push_back(y > 0 ? std::log(y) : kNegInf);
  return ws;
}

}  // namespace

TEST(EstimateCount, SpecExamples) {
  WeightStream twelves;
  twelves.log_y.assign(1000, std::log(12.0));
  EXPECT_NEAR(estimate_count(twelves), std::log(12.0), 1e-12);
  EXPECT_NEAR(estimate_count(stream_of({2, 2, 2})), std::log(2.0), 1e-12);
  EXPECT_NEAR(estimate_count(stream_of({4, 0, 0, 0})), 0.0, 1e-12);
}

TEST(EstimateCount, EdgeCases) {
  EXPECT_THROW(estimate_count(WeightStream{}), std::invalid_argument);
  EXPECT_EQ(estimate_count(stream_of({0, 0})), kNegInf);
}

TEST(EstimateCount, HugeWeightsDoNotOverflow) {
  WeightStream ws;
  ws.log_y = {1000.0, 1000.0 + std::log(3.0), kNegInf, 1000.0};
  // (e^1000 (1 + 3 + 1)) / 4
  EXPECT_NEAR(estimate_count(ws), 1000.0 + std::log(5.0 / 4.0), 1e-9);
}

TEST(EstimateCount, PermutationInvariant) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  WeightStream ws;
  for (int i = 0; i < 500; ++i) ws.log_y.push_back(i % 7 == 0 ? kNegInf : u(rng));
  const double ref = estimate_count(ws);
  for (int rep = 0; rep < 10; ++rep) {
    std::shuffle(ws.log_y.begin(), ws.log_y.end(), rng);
    EXPECT_NEAR(estimate_count(ws), ref, 1e-12 * std::abs(ref));
  }
}

TEST(Cv2, SpecExamples) {
  EXPECT_EQ(cv2(stream_of({5, 5, 5, 5})), 0.0);
  EXPECT_NEAR(cv2(stream_of({1, 3})), 0.5, 1e-12);
  // rejected entries are ignored
  EXPECT_NEAR(cv2(stream_of({1, 0, 3, 0, 0})), 0.5, 1e-12);
  EXPECT_EQ(cv2(stream_of({7, 0})), 0.0);
  EXPECT_THROW(cv2(stream_of({0, 0})), std::domain_error);
}

TEST(Cv2, ScaleInvariant) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  WeightStream ws;
  for (int i = 0; i < 300; ++i) ws.log_y.push_back(u(rng));
  const double ref = cv2(ws);
  for (double c : {1e-30, 0.5, 7.0, 1e200}) {
    WeightStream scaled = ws;
    for (double& v : scaled.log_y) v += std::log(c);
    EXPECT_NEAR(cv2(scaled), ref, 1e-9 * ref);
  }
}

TEST(NearestRank, Convention) {
  const std::vector<double> v{10, 20, 30, 40};
  EXPECT_EQ(nearest_rank(v, 0.25), 10);  // ceil(1.0) = 1st
  EXPECT_EQ(nearest_rank(v, 0.26), 20);
  EXPECT_EQ(nearest_rank(v, 0.75), 30);
  EXPECT_EQ(nearest_rank(v, 1.0), 40);
  EXPECT_EQ(nearest_rank(v, 0.0), 10);
  // The four equally likely resample means of Y = (1, 3).
  EXPECT_EQ(nearest_rank({1, 2, 2, 3}, 0.25), 1);
  EXPECT_EQ(nearest_rank({1, 2, 2, 3}, 0.75), 2);
  // q*B lands on an integer through rounding noise
  std::vector<double> thousand(1000);
  for (int i = 0; i < 1000; ++i) thousand[i] = i;
  EXPECT_EQ(nearest_rank(thousand, 0.025), 24);
}

TEST(Bootstrap, ConstantStreamIsDegenerate) {
  WeightStream ws;
  ws.log_y.assign(200, std::log(28.0));
  const auto b = bootstrap_ci(ws, 500, 0.05, 1);
  EXPECT_EQ(b.estimate_log.lo, estimate_count(ws));
  EXPECT_EQ(b.estimate_log.hi, estimate_count(ws));
  EXPECT_EQ(b.cv2.lo, 0.0);
  EXPECT_EQ(b.cv2.hi, 0.0);
}

TEST(Bootstrap, DeterministicGivenSeed) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  WeightStream ws;
  for (int i = 0; i < 400; ++i) ws.log_y.push_back(i % 9 == 0 ? kNegInf : u(rng));
  const auto a = bootstrap_ci(ws, 300, 0.05, 17);
  const auto b = bootstrap_ci(ws, 300, 0.05, 17);
  const auto c = bootstrap_ci(ws, 300, 0.05, 18);
  EXPECT_EQ(a.estimate_log.lo, b.estimate_log.lo);
  EXPECT_EQ(a.estimate_log.hi, b.estimate_log.hi);
  EXPECT_EQ(a.cv2.lo, b.cv2.lo);
  EXPECT_EQ(a.cv2.hi, b.cv2.hi);
  EXPECT_TRUE(a.estimate_log.lo != c.estimate_log.lo || a.estimate_log.hi != c.estimate_log.hi);
}

TEST(Bootstrap, OrderedAndNarrowingWithAlpha) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  WeightStream ws;
  for (int i = 0; i < 300; ++i) ws.log_y.push_back(u(rng));
  const auto wide = bootstrap_ci(ws, 1000, 0.01, 5);
  const auto mid = bootstrap_ci(ws, 1000, 0.05, 5);
  const auto narrow = bootstrap_ci(ws, 1000, 0.5, 5);
  for (const auto* b : {&wide, &mid, &narrow}) {
    EXPECT_LE(b->estimate_log.lo, b->estimate_log.hi);
    EXPECT_LE(b->cv2.lo, b->cv2.hi);
  }
  // same seed, same replications: only the percentile positions move
  EXPECT_LE(wide.estimate_log.lo, mid.estimate_log.lo);
  EXPECT_LE(mid.estimate_log.lo, narrow.estimate_log.lo);
  EXPECT_GE(wide.estimate_log.hi, mid.estimate_log.hi);
  EXPECT_GE(mid.estimate_log.hi, narrow.estimate_log.hi);
}

TEST(Bootstrap, TwoPointStreamReplications) {
  // Resampling (1, 3) gives means 1, 2, 3 with probabilities 1/4, 1/2, 1/4.
  const auto ws = stream_of({1, 3});
  const auto b = bootstrap_ci(ws, 4000, 0.5, 3);
  EXPECT_TRUE(std::abs(b.estimate_log.lo - std::log(1.0)) < 1e-12 || std::abs(b.estimate_log.lo - std::log(2.0)) < 1e-12);
  EXPECT_TRUE(std::abs(b.estimate_log.hi - std::log(2.0)) < 1e-12 || std::abs(b.estimate_log.hi - std::log(3.0)) < 1e-12);
  const auto wide = bootstrap_ci(ws, 4000, 0.02, 3);
  EXPECT_NEAR(wide.estimate_log.lo, std::log(1.0), 1e-12);
  EXPECT_NEAR(wide.estimate_log.hi, std::log(3.0), 1e-12);
}

TEST(Bootstrap, InputValidation) {
  EXPECT_THROW(bootstrap_ci(stream_of({0, 0}), 10, 0.05, 1), std::domain_error);
  EXPECT_THROW(bootstrap_ci(stream_of({1, 2}), 0, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(bootstrap_ci(stream_of({1, 2}), 10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(bootstrap_ci(stream_of({1, 2}), 10, 1.0, 1), std::invalid_argument);
}

TEST(Bootstrap, ReplicationWithoutAcceptancesCountsAsZero) {
  // One acceptance in 20: some resamples miss it entirely.
  WeightStream ws;
  ws.log_y.assign(20, kNegInf);
  ws.log_y[3] = std::log(20.0);
  const auto b = bootstrap_ci(ws, 2000, 0.2, 9);
  EXPECT_EQ(b.estimate_log.lo, kNegInf);
  EXPECT_TRUE(std::isfinite(b.estimate_log.hi));
  EXPECT_EQ(b.cv2.hi, 0.0);
}

TEST(FormatLogValue, Rendering) {
  EXPECT_EQ(format_log_value(std::log(12.0)), "1.200000e+01");
  EXPECT_EQ(format_log_value(std::log(2.0)), "2.000000e+00");
  EXPECT_EQ(format_log_value(std::log(5.010225e44)), "5.010225e+44");
  EXPECT_EQ(format_log_value(std::log(9.9999999e5)), "1.000000e+06");
  EXPECT_EQ(format_log_value(std::log(0.5)), "5.000000e-01");
  EXPECT_EQ(format_log_value(kNegInf), "0");
  EXPECT_EQ(format_log_value(1000.0 * std::log(10.0)), "1.000000e+1000");
}

TEST(Summarize, Fields) {
  const auto r = summarize(stream_of({1, 0, 3, 0}));
  EXPECT_EQ(r.n, 4u);
  EXPECT_EQ(r.accepted, 2u);
  EXPECT_NEAR(r.acceptance_rate(), 0.5, 1e-15);
  EXPECT_NEAR(r.estimate_log, 0.0, 1e-12);
  EXPECT_NEAR(r.cv2, 0.5, 1e-12);
  const auto none = summarize(stream_of({0, 0}));
  EXPECT_EQ(none.accepted, 0u);
  EXPECT_EQ(none.estimate_display, "0");
}
