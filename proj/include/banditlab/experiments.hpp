#pragma once

// Multi-run experiment harness.
//
// Run r of every agent draws q* from the same stream, so agents compared in
// one experiment face identical bandit instances. Action streams are keyed by
// agent name; reward-noise streams are too unless couple_reward_noise is set.
// Runs may execute on any number of threads; aggregation always folds runs in
// run-index order, so results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/agents.hpp"
#include "banditlab/diagnostics.hpp"
#include "banditlab/rewards.hpp"

namespace banditlab {

struct QStarSource {
  bool explicit_values = false;
  double mean = 4.0;
  double std = 1.0;
  std::vector<double> values;  // explicit_values only; used for every run
};

struct RewardSpec {
  RewardKind kind = RewardKind::kGaussian;
  double sigma = 1.0;
  double nu = 2.5;
  bool rescale = true;
  QStarSource q_star;

  RewardModel build(ArmStats stats) const;
};

struct ExperimentConfig {
  std::size_t k = 10;
  std::size_t T = 2000;
  std::size_t M = 1000;
  std::uint64_t master_seed = 0;
  RewardSpec reward;
  std::vector<AgentConfig> agents;
  bool diagnostics = false;
  bool couple_reward_noise = false;

  // Throws InvalidArgument. Requires M >= 2 (confidence intervals).
  void validate() const;
  const AgentConfig& agent(std::string_view name) const;
};

struct RunSeries {
  std::vector<double> regret;            // R(Pi_{H_t}); UCB: q*(a*) - q*(A_t)
  std::vector<double> empirical_regret;  // max q* - R_t
  bool diverged = false;
  std::size_t diverged_at = 0;
  std::optional<DiagnosticSeries> diagnostics;
  std::uint64_t q_star_hash = 0;
  double min_pi_best = 1.0;
};

ArmStats draw_run_q_star(const ExperimentConfig& config, std::size_t run_index);
std::uint64_t hash_q_star(const ArmStats& stats) noexcept;

// T steps of sample -> reward -> update for one agent on run `run_index`.
// A divergence stops the run; the remaining steps repeat the last values.
RunSeries run_single(const ExperimentConfig& config, std::string_view agent_name,
                     std::size_t run_index);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 sd / sqrt(n), sample sd
};

MeanCi mean_ci(std::span<const double> values);

struct AgentAggregate {
  std::string name;
  std::vector<double> mean_regret;
  std::vector<double> ci_half_width;
  std::vector<double> mean_empirical_regret;
  std::size_t divergence_count = 0;
  std::optional<DiagnosticSeries> diagnostics;  // per-t means over runs
  double mean_min_pi_best = 1.0;
  double min_min_pi_best = 1.0;
  std::vector<std::uint64_t> q_star_hashes;     // per run
};

struct RunAggregate {
  std::size_t T = 0;
  std::size_t M = 0;
  std::vector<AgentAggregate> agents;

  const AgentAggregate& agent(std::string_view name) const;
};

RunAggregate run_many(const ExperimentConfig& config, std::size_t threads = 1);

// Mean of the last ceil(fraction * n) entries.
double final_window_mean(std::span<const double> series, double fraction = 0.1);

enum class RankBy { kTrueRegret, kEmpiricalRegret };

std::string_view to_string(RankBy r);
std::optional<RankBy> rank_by_from_string(std::string_view name);

struct RankedAgent {
  std::string name;
  double final_window_mean = 0.0;
  std::size_t divergence_count = 0;
};

struct Ranking {
  std::vector<RankedAgent> rows;  // config order
  std::size_t argmin = 0;
};

// Ties resolve to the earliest agent.
Ranking rank_agents(const RunAggregate& aggregate, RankBy by, double window_fraction = 0.1);

struct GridAxis {
  enum class Kind { kRhoConstant, kRhoLinear, kGammaEntConstant };
  Kind kind = Kind::kRhoConstant;
  std::vector<double> values;     // kRhoConstant, kGammaEntConstant
  std::vector<double> c1_values;  // kRhoLinear
  std::vector<double> c2_values;  // kRhoLinear
  PgConfig base;
};

std::string_view to_string(GridAxis::Kind kind);
std::optional<GridAxis::Kind> grid_kind_from_string(std::string_view name);

// One named PG agent per grid cell, e.g. "rho_0.1", "rho_0.1_c2_0.0005", "ent_0.01".
std::vector<AgentConfig> expand_grid(const GridAxis& axis);

struct GridResult {
  RunAggregate aggregate;
  Ranking ranking;
};

// Replaces config.agents with the grid cells and runs them together.
GridResult grid_search(ExperimentConfig config, const GridAxis& axis, RankBy by,
                       std::size_t threads = 1);

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace banditlab
