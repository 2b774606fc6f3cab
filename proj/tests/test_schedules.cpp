#include <gtest/gtest.h>

#include <cmath>

#include "banditlab/errors.hpp"
#include "banditlab/schedules.hpp"

using namespace banditlab;

TEST(ScheduleEval, Constant) {
  const auto s = ScheduleSpec::constant(0.1);
  for (std::uint64_t t : {0u, 1u, 17u, 1999u, 1000000u}) EXPECT_EQ(eval(s, t), 0.1);
}

TEST(ScheduleEval, Linear) {
  EXPECT_NEAR(eval(ScheduleSpec::linear(1.0, 0.2), 5), 0.5, 1e-15);
  EXPECT_EQ(eval(ScheduleSpec::linear(1.0, 0.2), 0), 1.0);
}

TEST(ScheduleEval, OtherFamilies) {
  EXPECT_NEAR(eval(ScheduleSpec::power(2.0, 1.0, 0.5), 9), 2.0 / 4.0, 1e-15);
  EXPECT_NEAR(eval(ScheduleSpec::log(1.0, 1.0), 4), 1.0 / (1.0 + std::log(5.0)), 1e-15);
  EXPECT_NEAR(eval(ScheduleSpec::loglog(1.0, 1.0), 4),
              1.0 / (1.0 + std::log(1.0 + std::log(5.0))), 1e-15);
}

TEST(ScheduleEval, CumulativeRhoSumsStrictlyPastSteps) {
  const auto s = ScheduleSpec::cumulative_rho(1.0, 1.0, ScheduleSpec::constant(0.1));
  // c1 / (c2 + rho_0 + rho_1 + rho_2) at t = 3
  EXPECT_NEAR(eval(s, 3), 1.0 / 1.3, 1e-12);
  EXPECT_NEAR(eval(s, 3), 0.76923, 1e-5);
  EXPECT_NEAR(eval(s, 0), 1.0, 1e-15);
}

TEST(ScheduleEval, TabulateMatchesEval) {
  const ScheduleSpec specs[] = {
      ScheduleSpec::constant(0.3), ScheduleSpec::linear(0.1, 0.0005),
      ScheduleSpec::power(1.0, 0.5, 0.7), ScheduleSpec::log(2.0, 3.0), ScheduleSpec::loglog(1.0, 2.0),
      ScheduleSpec::cumulative_rho(2.0, 0.5, ScheduleSpec::linear(1.0, 0.2))};
  for (const auto& s : specs) {
    const auto tab = tabulate(s, 300);
    const Schedule sched(s, 100);
    for (std::uint64_t t = 0; t < 300; ++t) {
      EXPECT_NEAR(tab[t], eval(s, t), 1e-13 * tab[t]) << to_string(s.kind) << " t=" << t;
      EXPECT_NEAR(sched.at(t), tab[t], 1e-13 * tab[t]);
    }
  }
}

TEST(ScheduleEval, DecreasingFamiliesAreMonotone) {
  const ScheduleSpec specs[] = {ScheduleSpec::linear(1.0, 0.2), ScheduleSpec::power(1.0, 1.0, 0.5),
                                ScheduleSpec::log(1.0, 1.0), ScheduleSpec::loglog(1.0, 1.0),
                                ScheduleSpec::cumulative_rho(1.0, 1.0, ScheduleSpec::constant(0.1))};
  for (const auto& s : specs) {
    const auto v = tabulate(s, 10000);
    for (std::size_t t = 1; t < v.size(); ++t) {
      ASSERT_LE(v[t], v[t - 1]) << to_string(s.kind) << " t=" << t;
      ASSERT_GT(v[t], 0.0);
    }
  }
}

TEST(ScheduleSpecValidation, RejectsBadParameters) {
  EXPECT_THROW(ScheduleSpec::constant(0.0).validate(), ScheduleError);
  EXPECT_THROW(ScheduleSpec::constant(-1.0).validate(), ScheduleError);
  EXPECT_THROW(ScheduleSpec::linear(1.0, -0.2).validate(), ScheduleError);
  EXPECT_THROW(ScheduleSpec::power(1.0, 1.0, 0.0).validate(), ScheduleError);
  EXPECT_THROW(ScheduleSpec::cumulative_rho(1.0, 0.0, ScheduleSpec::constant(0.1)).validate(),
               ScheduleError);
  ScheduleSpec orphan;
  orphan.kind = ScheduleKind::kCumulativeRho;
  EXPECT_THROW(orphan.validate(), ScheduleError);
  EXPECT_THROW(eval(ScheduleSpec::linear(1.0, -0.2), 10), ScheduleError);
}

TEST(ScheduleSpecStrings, RoundTrip) {
  for (auto k : {ScheduleKind::kConstant, ScheduleKind::kLinear, ScheduleKind::kPower,
                 ScheduleKind::kLog, ScheduleKind::kLogLog, ScheduleKind::kCumulativeRho}) {
    EXPECT_EQ(schedule_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(schedule_kind_from_string("cosine").has_value());
}

TEST(Certify, ConstantRhoLinearGamma) {
  const auto rep = certify(ScheduleSpec::constant(0.1), ScheduleSpec::linear(1.0, 0.2), 2000);
  EXPECT_TRUE(rep.gamma_decreasing);
  EXPECT_NEAR(rep.c_rho_gamma_inf, 1.66667, 1e-5);
  EXPECT_EQ(rep.c_rho_gamma_argmin, 0u);
  EXPECT_EQ(rep.t0, 0u);
  EXPECT_TRUE(rep.t0_found);
  EXPECT_NEAR(rep.sum_rho, 200.0, 1e-9);
  EXPECT_NEAR(rep.sum_rho_sq, 20.0, 1e-9);
  EXPECT_EQ(rep.gamma_hypothesis, HypothesisStatus::kSatisfied);
  EXPECT_EQ(rep.rho_hypothesis, HypothesisStatus::kViolated);
}

TEST(Certify, LargeRhoDelaysT0) {
  const auto rep = certify(ScheduleSpec::constant(10.0), ScheduleSpec::linear(1.0, 0.2), 2000);
  EXPECT_EQ(rep.t0, 45u);
  // rho gamma_t <= 1  <=>  1 + 0.2 t >= 10
  EXPECT_GT(10.0 * eval(ScheduleSpec::linear(1.0, 0.2), 44), 1.0);
  EXPECT_LE(10.0 * eval(ScheduleSpec::linear(1.0, 0.2), 45), 1.0);
}

TEST(Certify, ConstantGamma) {
  const auto rep = certify(ScheduleSpec::constant(0.1), ScheduleSpec::constant(0.5), 100);
  EXPECT_EQ(rep.c_rho_gamma_inf, 0.0);
  EXPECT_EQ(rep.gamma_hypothesis, HypothesisStatus::kViolated);
}

TEST(Certify, T0NotFound) {
  const auto rep = certify(ScheduleSpec::constant(10.0), ScheduleSpec::linear(1.0, 0.2), 40);
  EXPECT_FALSE(rep.t0_found);
}

TEST(Certify, HorizonTooShort) {
  EXPECT_THROW(certify(ScheduleSpec::constant(0.1), ScheduleSpec::constant(0.1), 1), InvalidArgument);
}

TEST(Classify, Families) {
  EXPECT_EQ(classify_rho(ScheduleSpec::linear(1.0, 0.1)), HypothesisStatus::kSatisfied);
  EXPECT_EQ(classify_rho(ScheduleSpec::constant(0.1)), HypothesisStatus::kViolated);
  EXPECT_EQ(classify_rho(ScheduleSpec::power(1.0, 1.0, 0.5)), HypothesisStatus::kViolated);
  EXPECT_EQ(classify_gamma(ScheduleSpec::log(1.0, 1.0)), HypothesisStatus::kSatisfied);
  EXPECT_EQ(classify_gamma(ScheduleSpec::constant(1.0)), HypothesisStatus::kViolated);
}
