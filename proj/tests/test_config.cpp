#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "banditlab/config.hpp"
#include "banditlab/errors.hpp"

#ifndef BANDITLAB_CONFIG_DIR
#error "BANDITLAB_CONFIG_DIR must point at configs/"
#endif

using namespace banditlab;

namespace {

Json minimal() {
  return Json::parse(R"({
    "experiment": {
      "k": 3, "T": 10, "M": 2,
      "agents": [{"name": "pg", "type": "pg", "rho": {"kind": "constant", "c1": 0.1}}]
    }
  })");
}

std::string pointer_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<no error>";
}

}  // namespace

TEST(ParseSchedule, RoundTrip) {
  const ScheduleSpec specs[] = {
      ScheduleSpec::constant(0.1), ScheduleSpec::linear(1.0, 0.2), ScheduleSpec::power(1.0, 1.0, 0.5),
      ScheduleSpec::log(2.0, 0.5), ScheduleSpec::loglog(1.0, 3.0),
      ScheduleSpec::cumulative_rho(1.0, 1.0, ScheduleSpec::linear(0.5, 0.01))};
  for (const auto& s : specs) EXPECT_EQ(parse_schedule(to_json(s)), s);
}

TEST(ParseSchedule, Errors) {
  EXPECT_THROW(parse_schedule(Json::parse(R"({"kind":"cosine","c1":1})")), ConfigError);
  EXPECT_THROW(parse_schedule(Json::parse(R"({"kind":"linear","c1":1,"c2":-0.2})")), ConfigError);
  EXPECT_THROW(parse_schedule(Json::parse(R"({"kind":"constant","c1":"0.1"})")), ConfigError);
  try {
    parse_schedule(Json::parse(R"({"kind":"constant","c1":1,"extra":2})"), "/rho");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer(), "/rho/extra");
  }
}

TEST(ParseConfig, Defaults) {
  const ConfigFile f = parse_config(minimal());
  EXPECT_EQ(f.experiment.k, 3u);
  EXPECT_EQ(f.experiment.master_seed, 0u);
  EXPECT_EQ(f.experiment.reward.kind, RewardKind::kGaussian);
  EXPECT_FALSE(f.experiment.diagnostics);
  const auto& pg = std::get<PgConfig>(f.experiment.agents[0].params);
  EXPECT_EQ(pg.h0.kind, H0Spec::Kind::kBiased);
  EXPECT_TRUE(pg.use_baseline);
  EXPECT_EQ(pg.entropy_estimator, EntropyEstimator::kComponentwise);
  EXPECT_EQ(f.output.dir, "out");
  EXPECT_EQ(f.output.smoothing_window, 1u);
}

TEST(ParseConfig, UnknownKeysCarryPointers) {
  Json d = minimal();
  d["extra"] = 1;
  EXPECT_EQ(pointer_of(d), "/extra");

  d = minimal();
  d["experiment"]["agents"][0]["rho"]["c3"] = 1;
  EXPECT_EQ(pointer_of(d), "/experiment/agents/0/rho/c3");

  d = minimal();
  d["output"] = {{"smoothing_window", 0}};
  EXPECT_EQ(pointer_of(d), "/output/smoothing_window");

  d = minimal();
  d["experiment"]["a/b~c"] = 1;
  EXPECT_EQ(pointer_of(d), "/experiment/a~1b~0c");
}

TEST(ParseConfig, TypeAndRangeErrors) {
  Json d = minimal();
  d["experiment"]["M"] = 1;
  EXPECT_EQ(pointer_of(d), "/experiment/M");

  d = minimal();
  d["experiment"]["k"] = -3;
  EXPECT_EQ(pointer_of(d), "/experiment/k");

  d = minimal();
  d["experiment"]["agents"][0]["type"] = "thompson";
  EXPECT_EQ(pointer_of(d), "/experiment/agents/0/type");

  d = minimal();
  d["experiment"]["agents"].push_back(d["experiment"]["agents"][0]);
  EXPECT_EQ(pointer_of(d), "/experiment/agents/1/name");

  d = minimal();
  d["experiment"]["agents"][0]["name"] = "../x";
  EXPECT_EQ(pointer_of(d), "/experiment/agents/0/name");

  d = minimal();
  d["experiment"]["reward"] = {{"kind", "student_t"}, {"nu", 0.5}};
  EXPECT_EQ(pointer_of(d), "/experiment/reward/nu");

  d = minimal();
  d["experiment"]["metrics"] = {"regret"};
  EXPECT_EQ(pointer_of(d), "/experiment/metrics/0");

  d = minimal();
  d["experiment"]["reward"] = {{"q_star", {{"source", "explicit"}, {"values", {1, 2}}}}};
  EXPECT_EQ(pointer_of(d), "/experiment/reward/q_star/values");
}

TEST(ParseConfig, AgentsAndMetrics) {
  const Json d = Json::parse(R"({
    "experiment": {
      "k": 2, "T": 5, "M": 3, "master_seed": 9,
      "reward": {"kind": "student_t", "nu": 2.5, "rescale": false,
                 "q_star": {"source": "explicit", "values": [1.0, 0.5]}},
      "metrics": ["true_regret", "diagnostics"],
      "couple_reward_noise": true,
      "agents": [
        {"name": "ent", "type": "pg", "rho": {"kind": "constant", "c1": 0.1},
         "gamma_ent": {"kind": "linear", "c1": 1, "c2": 0.2},
         "h0": {"kind": "explicit", "values": [0, 1]},
         "entropy_form": "one_plus_log", "entropy_estimator": "sampled_action",
         "use_baseline": false},
        {"name": "ucb", "type": "ucb", "explore_c": 2}
      ]
    }
  })");
  const ConfigFile f = parse_config(d);
  const auto& e = f.experiment;
  EXPECT_EQ(e.master_seed, 9u);
  EXPECT_TRUE(e.diagnostics);
  EXPECT_TRUE(e.couple_reward_noise);
  EXPECT_EQ(e.reward.kind, RewardKind::kStudentT);
  EXPECT_FALSE(e.reward.rescale);
  const auto& pg = std::get<PgConfig>(e.agents[0].params);
  EXPECT_EQ(*pg.gamma_ent, ScheduleSpec::linear(1.0, 0.2));
  EXPECT_TRUE(pg.entropy_one_plus_log);
  EXPECT_EQ(pg.entropy_estimator, EntropyEstimator::kSampledAction);
  EXPECT_FALSE(pg.use_baseline);
  EXPECT_EQ(std::get<UcbConfig>(e.agents[1].params).explore_c, 2.0);

  // serialization round trip
  Json again = {{"experiment", to_json(e)}};
  const ConfigFile g = parse_config(again);
  EXPECT_EQ(to_json(g.experiment), to_json(e));
}

TEST(ParseConfig, GridAndScenarios) {
  Json d = Json::parse(R"({
    "experiment": {"k": 4, "T": 10, "M": 2},
    "grid": {"axis": "rho_linear", "c1_values": [0.1, 1], "c2_values": [0.0005],
             "base_agent": {"h0": {"kind": "zeros"}}, "rank_by": "empirical_regret"},
    "scenarios": [{"name": "k8", "k": 8}, {"name": "heavy", "reward": {"kind": "student_t", "nu": 1.5}}]
  })");
  const ConfigFile f = parse_config(d);
  ASSERT_TRUE(f.grid.has_value());
  EXPECT_EQ(f.grid->rank_by, RankBy::kEmpiricalRegret);
  ASSERT_EQ(f.experiment.agents.size(), 2u);
  EXPECT_EQ(f.experiment.agents[0].name, "rho_0.1_c2_0.0005");
  const auto runs = f.expand();
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].first, "k8");
  EXPECT_EQ(runs[0].second.k, 8u);
  EXPECT_EQ(runs[1].second.reward.kind, RewardKind::kStudentT);
  EXPECT_EQ(runs[1].second.k, 4u);

  d["grid"]["values"] = {1};
  EXPECT_EQ(pointer_of(d), "/grid/values");
}

TEST(LoadConfig, MissingFileAndBadJson) {
  EXPECT_THROW(load_config("/nonexistent/banditlab.json"), ConfigError);
  const auto tmp = std::filesystem::temp_directory_path() / "banditlab_bad.json";
  {
    std::ofstream(tmp) << "{\"experiment\": ";
  }
  EXPECT_THROW(load_config(tmp), ConfigError);
  std::filesystem::remove(tmp);
}

TEST(FigureConfigs, AllThirteenParse) {
  for (int i = 1; i <= 13; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "fig%02d.json", i);
    const auto path = std::filesystem::path(BANDITLAB_CONFIG_DIR) / name;
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_NO_THROW(load_config(path)) << path;
  }
}

TEST(FigureConfigs, ConstantStepSweep) {
  const auto f = load_config(std::filesystem::path(BANDITLAB_CONFIG_DIR) / "fig01.json");
  const auto& e = f.experiment;
  EXPECT_EQ(e.k, 10u);
  EXPECT_EQ(e.T, 2000u);
  EXPECT_EQ(e.M, 1000u);
  ASSERT_EQ(e.agents.size(), 5u);
  for (const auto& a : e.agents) {
    const auto& pg = std::get<PgConfig>(a.params);
    EXPECT_FALSE(pg.gamma_l2.has_value());
    EXPECT_FALSE(pg.gamma_ent.has_value());
    EXPECT_EQ(pg.h0.build(10), PreferenceVector::biased(10, 5.0));
  }
}
