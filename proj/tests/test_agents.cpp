#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "banditlab/agents.hpp"
#include "banditlab/errors.hpp"

using namespace banditlab;

namespace {

PgAgentState state_at(std::vector<double> h, double baseline, std::optional<double> gamma_l2,
                      std::optional<double> gamma_ent, double rho = 0.1) {
  PgConfig cfg;
  cfg.rho = ScheduleSpec::constant(rho);
  if (gamma_l2 && *gamma_l2 > 0.0) cfg.gamma_l2 = ScheduleSpec::constant(*gamma_l2);
  if (gamma_ent) cfg.gamma_ent = ScheduleSpec::constant(*gamma_ent);
  cfg.h0.kind = H0Spec::Kind::kExplicit;
  cfg.h0.values = h;
  PgAgentState s = make_pg_state(cfg, h.size());
  s.reward_baseline = baseline;
  return s;
}

}  // namespace

TEST(H0Spec, Build) {
  H0Spec h;
  EXPECT_EQ(h.build(3), PreferenceVector({5.0, 0.0, 0.0}));
  h.kind = H0Spec::Kind::kZeros;
  EXPECT_EQ(h.build(2), PreferenceVector::zeros(2));
  h.kind = H0Spec::Kind::kExplicit;
  h.values = {1.0, 2.0};
  EXPECT_THROW(h.build(3), InvalidArgument);
}

TEST(PgSampleAction, NearDiracAlwaysPicksPeak) {
  PgAgentState s = state_at({0.0, 40.0, 0.0, 0.0}, 0.0, std::nullopt, std::nullopt);
  RngStream rng(1, 2);
  for (int i = 0; i < 1000000; ++i) ASSERT_EQ(pg_sample_action(s, rng), 1u);
}

TEST(PgSampleAction, UniformFrequencies) {
  PgAgentState s = state_at(std::vector<double>(10, 0.0), 0.0, std::nullopt, std::nullopt);
  RngStream rng(4, 4);
  std::vector<int> counts(10, 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) ++counts[pg_sample_action(s, rng)];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.1, 0.0015);
}

TEST(PgSampleAction, ReplayIsIdentical) {
  PgAgentState s = state_at({0.3, -0.1, 1.2}, 0.0, std::nullopt, std::nullopt);
  RngStream a(7, 7), b(7, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(pg_sample_action(s, a), pg_sample_action(s, b));
}

TEST(SampleIndex, SkipsZeroMass) {
  RngStream rng(2, 2);
  const std::vector<double> p = {0.0, 0.5, 0.0, 0.5, 0.0};
  for (int i = 0; i < 10000; ++i) {
    const auto a = sample_index(p, rng);
    ASSERT_TRUE(a == 1 || a == 3);
  }
}

TEST(PgGradient, L2Example) {
  // First arm pulled, R = 1, baseline 0, gamma_l2 = 0.5 at H = 0.
  const auto s = state_at({0.0, 0.0}, 0.0, 0.5, std::nullopt);
  const auto g = pg_stochastic_gradient(s, 0, 1.0);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], -0.5);
}

TEST(PgGradient, ZeroAdvantageNoRegularization) {
  const auto s = state_at({0.3, -1.0, 2.0}, 1.7, std::nullopt, std::nullopt);
  for (double g : pg_stochastic_gradient(s, 2, 1.7)) EXPECT_EQ(g, 0.0);
}

TEST(PgGradient, EntropyExample) {
  const auto s = state_at({0.0, 0.0}, 0.0, 0.0, 1.0);
  const auto g = pg_stochastic_gradient(s, 0, 1.0);
  EXPECT_NEAR(g[0], 0.846574, 1e-6);
  EXPECT_NEAR(g[1], -0.846574, 1e-6);
  EXPECT_NEAR(g[0], 0.5 * (1.0 - std::log(0.5)), 1e-15);
}

TEST(PgGradient, EntropyEstimatorsAgreeAtUniformPolicy) {
  auto s = state_at({0.0, 0.0, 0.0}, 0.0, std::nullopt, 0.7);
  const auto g1 = pg_stochastic_gradient(s, 1, 2.0);
  s.entropy_estimator = EntropyEstimator::kSampledAction;
  const auto g2 = pg_stochastic_gradient(s, 1, 2.0);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(g1[a], g2[a], 1e-15);
}

TEST(PgGradient, OnePlusLogShiftsBracket) {
  auto s = state_at({0.0, 0.0}, 0.0, std::nullopt, 1.0);
  s.entropy_one_plus_log = true;
  const auto g = pg_stochastic_gradient(s, 0, 1.0);
  EXPECT_NEAR(g[0], 0.5 * (1.0 - 1.0 - std::log(0.5)), 1e-15);
}

TEST(PgGradient, ZeroEntropyWeightIsBitIdenticalToL2) {
  // Schedules are strictly positive, so a zero weight goes through the kernel.
  const std::vector<double> h = {0.4, -1.3, 2.2, 0.0};
  const auto b = state_at(h, 0.8, 0.3, std::nullopt);
  std::vector<double> pi(h.size()), ga(h.size());
  softmax_into(h, pi);
  for (std::size_t act = 0; act < h.size(); ++act) {
    const auto gb = pg_stochastic_gradient(b, act, 3.1);
    for (auto est : {EntropyEstimator::kComponentwise, EntropyEstimator::kSampledAction}) {
      for (bool one_plus_log : {false, true}) {
        pg_gradient_kernel(h, pi, act, 3.1 - 0.8, 0.3, 0.0, one_plus_log, est, ga);
        for (std::size_t i = 0; i < h.size(); ++i) ASSERT_EQ(ga[i], gb[i]);
      }
    }
  }
}

TEST(PgGradient, NoBaselineUsesRawReward) {
  auto s = state_at({0.0, 0.0}, 5.0, std::nullopt, std::nullopt);
  s.use_baseline = false;
  const auto g = pg_stochastic_gradient(s, 1, 2.0);
  EXPECT_DOUBLE_EQ(g[0], -1.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
}

TEST(PgUpdate, PureDecay) {
  const auto s = state_at({1.0, 1.0}, 2.0, 1.0, std::nullopt, 0.1);
  const auto next = pg_update(s, 0, 2.0);
  EXPECT_NEAR(next.h[0], 0.9, 1e-15);
  EXPECT_NEAR(next.h[1], 0.9, 1e-15);
  EXPECT_EQ(next.step, 1u);
}

TEST(PgUpdate, NoChangeWithoutAdvantageOrPenalty) {
  const auto s = state_at({0.2, -0.4, 1.0}, 2.0, std::nullopt, std::nullopt);
  EXPECT_EQ(pg_update(s, 1, 2.0).h, s.h);
}

TEST(PgUpdate, AppliesStepSize) {
  const auto s = state_at({0.0, 0.0}, 0.0, 0.5, std::nullopt, 0.1);
  const auto next = pg_update(s, 0, 1.0);
  EXPECT_NEAR(next.h[0], 0.05, 1e-15);
  EXPECT_NEAR(next.h[1], -0.05, 1e-15);
}

TEST(PgUpdate, DivergenceGuard) {
  const auto s = state_at({0.0, 0.0}, 0.0, std::nullopt, std::nullopt, 1e7);
  try {
    pg_update(s, 0, 4.0);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 0u);
    EXPECT_EQ(e.h_norm(), 0.0);
  }
  std::vector<double> pi = {0.5, 0.5}, scratch(2);
  auto inplace = s;
  EXPECT_THROW(pg_step(inplace, pi, 0, 4.0, scratch), DivergenceError);
  EXPECT_EQ(inplace.h, s.h);
}

TEST(Baseline, RunningMean) {
  auto s = state_at({0.0, 0.0}, 0.0, std::nullopt, std::nullopt);
  for (double r : {1.0, 2.0, 3.0}) s = pg_update(s, 0, r);
  EXPECT_DOUBLE_EQ(s.reward_baseline, 2.0);

  const auto fresh = state_at({0.0, 0.0}, 0.0, std::nullopt, std::nullopt);
  EXPECT_DOUBLE_EQ(baseline_after(fresh, 4.25), 4.25);

  auto c = fresh;
  for (int t = 0; t < 50; ++t) {
    c = pg_update(c, t % 2, 1.5);
    ASSERT_DOUBLE_EQ(c.reward_baseline, 1.5);
  }
}

TEST(Baseline, GradientUsesPreUpdateMean) {
  // The advantage at step t uses the mean of R_0..R_{t-1}.
  auto s = state_at({0.0, 0.0}, 0.0, std::nullopt, std::nullopt, 1.0);
  s = pg_update(s, 0, 1.0);  // baseline 0 -> advantage 1
  EXPECT_NEAR(s.h[0], 0.5, 1e-15);
  const auto h_before = s.h;
  s = pg_update(s, 0, 1.0);  // baseline now 1 -> advantage 0
  EXPECT_EQ(s.h, h_before);
}

TEST(UcbSelect, InitializationPhase) {
  auto s = make_ucb_state(2);
  s.counts = {0, 3};
  s.means = {0.0, 9.0};
  s.step = 3;
  EXPECT_EQ(ucb_select(s), 0u);
}

TEST(UcbSelect, ScoresExample) {
  auto s = make_ucb_state(2);
  s.counts = {10, 10};
  s.means = {1.0, 0.5};
  s.step = 20;
  EXPECT_EQ(ucb_select(s), 0u);
  const double bonus = std::sqrt(2.0) * std::sqrt(std::log(20.0) / 10.0);
  EXPECT_NEAR(1.0 + bonus, 1.77405, 1e-5);
  EXPECT_NEAR(0.5 + bonus, 1.27405, 1e-5);
}

TEST(UcbSelect, TieGoesToLowestIndex) {
  auto s = make_ucb_state(3);
  s.counts = {4, 4, 4};
  s.means = {2.0, 2.0, 2.0};
  s.step = 12;
  EXPECT_EQ(ucb_select(s), 0u);
}

TEST(UcbSelect, BonusFavoursRarelyPulledArm) {
  auto s = make_ucb_state(2);
  s.counts = {100, 2};
  s.means = {1.0, 0.9};
  s.step = 102;
  EXPECT_EQ(ucb_select(s), 1u);
}

TEST(UcbUpdate, Means) {
  auto s = make_ucb_state(2);
  s = ucb_update(s, 1, 2.5);
  EXPECT_DOUBLE_EQ(s.means[1], 2.5);
  EXPECT_EQ(s.counts[1], 1u);
  s = ucb_update(s, 0, 1.0);
  s = ucb_update(s, 0, 3.0);
  EXPECT_DOUBLE_EQ(s.means[0], 2.0);
  EXPECT_EQ(s.counts[0], 2u);
  EXPECT_EQ(s.step, 3u);
}

TEST(UcbConfig, RejectsNonPositiveExploration) {
  EXPECT_THROW(make_ucb_state(3, 0.0), InvalidArgument);
}
