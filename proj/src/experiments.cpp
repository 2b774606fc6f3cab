#include "banditlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "banditlab/errors.hpp"

namespace banditlab {

RewardModel RewardSpec::build(ArmStats stats) const {
  RewardModel model{kind, std::move(stats), sigma, nu, rescale};
  model.validate();
  return model;
}

void ExperimentConfig::validate() const {
  if (k < 2) throw InvalidArgument("k must be >= 2");
  if (M < 2) throw InvalidArgument("M must be >= 2 for confidence intervals");
  if (agents.empty()) throw InvalidArgument("at least one agent is required");
  if (reward.q_star.explicit_values && reward.q_star.values.size() != k) {
    throw InvalidArgument("explicit q_star must have k entries");
  }
  RewardModel{reward.kind, ArmStats(std::vector<double>(k, 0.0)), reward.sigma, reward.nu,
              reward.rescale}
      .validate();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (agents[i].name == agents[j].name) {
        throw InvalidArgument("duplicate agent name '" + agents[i].name + "'");
      }
    }
    if (const auto* pg = std::get_if<PgConfig>(&agents[i].params)) {
      pg->rho.validate();
      if (pg->gamma_l2) pg->gamma_l2->validate();
      if (pg->gamma_ent) pg->gamma_ent->validate();
      pg->h0.build(k);
    } else {
      make_ucb_state(k, std::get<UcbConfig>(agents[i].params).explore_c);
    }
  }
}

const AgentConfig& ExperimentConfig::agent(std::string_view name) const {
  for (const auto& a : agents) {
    if (a.name == name) return a;
  }
  throw InvalidArgument("unknown agent '" + std::string(name) + "'");
}

const AgentAggregate& RunAggregate::agent(std::string_view name) const {
  for (const auto& a : agents) {
    if (a.name == name) return a;
  }
  throw InvalidArgument("unknown agent '" + std::string(name) + "'");
}

ArmStats draw_run_q_star(const ExperimentConfig& config, std::size_t run_index) {
  const auto& src = config.reward.q_star;
  if (src.explicit_values) return ArmStats(src.values);
  RngStream rng(config.master_seed, derive_stream_id(run_index, 0, StreamPurpose::kQStar));
  return make_q_star(rng, config.k, src.mean, src.std);
}

std::uint64_t hash_q_star(const ArmStats& stats) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : stats.q_star()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

namespace {

void pad_series(RunSeries& s, std::size_t from, std::size_t T) {
  if (from == 0) return;
  s.regret.resize(T, s.regret[from - 1]);
  s.empirical_regret.resize(T, s.empirical_regret[from - 1]);
}

void run_pg(const ExperimentConfig& config, const PgConfig& pg, const RewardModel& model,
            RngStream& action_rng, RngStream& reward_rng, RunSeries& out) {
  const std::size_t k = config.k;
  const std::size_t T = config.T;
  const auto q = model.stats.q_star();
  const double q_max = model.stats.best_value();

  PgAgentState state = make_pg_state(pg, k, T);
  std::vector<double> pi(k);
  std::vector<double> scratch(k);
  std::optional<DiagnosticTracker> tracker;
  if (config.diagnostics) tracker.emplace(model.stats, T);

  for (std::size_t t = 0; t < T; ++t) {
    softmax_into(state.h.values(), pi);
    out.regret.push_back(regret_of(pi, q, q_max));
    if (tracker) tracker->record(state.h.values(), pi, state.rho.at(t), state.gamma_l2_at_step());
    const std::size_t action = sample_index(pi, action_rng);
    const double reward = draw_reward(model, action, reward_rng);
    out.empirical_regret.push_back(q_max - reward);
    try {
      pg_step(state, pi, action, reward, scratch);
    } catch (const DivergenceError&) {
      out.diverged = true;
      out.diverged_at = t;
      pad_series(out, t + 1, T);
      if (tracker) tracker->pad_to(T);
      break;
    }
  }
  if (tracker) {
    out.min_pi_best = tracker->min_pi_best();
    out.diagnostics = std::move(*tracker).take();
  }
}

void run_ucb(const ExperimentConfig& config, const UcbConfig& ucb, const RewardModel& model,
             RngStream& reward_rng, RunSeries& out) {
  const double q_max = model.stats.best_value();
  UcbState state = make_ucb_state(config.k, ucb.explore_c);
  for (std::size_t t = 0; t < config.T; ++t) {
    const std::size_t action = ucb_select(state);
    out.regret.push_back(q_max - model.stats[action]);
    const double reward = draw_reward(model, action, reward_rng);
    out.empirical_regret.push_back(q_max - reward);
    ucb_step(state, action, reward);
  }
}

}  // namespace

RunSeries run_single(const ExperimentConfig& config, std::string_view agent_name,
                     std::size_t run_index) {
  const AgentConfig& agent = config.agent(agent_name);
  const ArmStats stats = draw_run_q_star(config, run_index);
  const RewardModel model = config.reward.build(stats);
  const std::uint64_t key = hash_name(agent.name);

  RngStream action_rng(config.master_seed,
                       derive_stream_id(run_index, key, StreamPurpose::kAction));
  RngStream reward_rng(
      config.master_seed,
      derive_stream_id(run_index, config.couple_reward_noise ? 0 : key,
                       StreamPurpose::kRewardNoise));

  RunSeries out;
  out.q_star_hash = hash_q_star(stats);
  out.regret.reserve(config.T);
  out.empirical_regret.reserve(config.T);
  if (const auto* pg = std::get_if<PgConfig>(&agent.params)) {
    run_pg(config, *pg, model, action_rng, reward_rng, out);
  } else {
    run_ucb(config, std::get<UcbConfig>(agent.params), model, reward_rng, out);
  }
  return out;
}

MeanCi mean_ci(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgument("mean_ci needs at least 2 values");
  double mean = 0.0;
  double m2 = 0.0;
  double n = 0.0;
  for (double v : values) {
    n += 1.0;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  const double sd = std::sqrt(std::max(m2, 0.0) / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

namespace {

// Welford accumulators per time step, folded in run order.
struct Accumulator {
  std::vector<double> mean, m2, emp_mean;
  std::optional<DiagnosticSeries> diag_sum;
  std::size_t runs = 0;
  std::size_t diverged = 0;
  double min_pi_sum = 0.0;
  double min_pi_min = 1.0;
  std::vector<std::uint64_t> hashes;

  explicit Accumulator(std::size_t T) : mean(T, 0.0), m2(T, 0.0), emp_mean(T, 0.0) {}

  void add(const RunSeries& s) {
    const double n = static_cast<double>(++runs);
    for (std::size_t t = 0; t < mean.size(); ++t) {
      const double d = s.regret[t] - mean[t];
      mean[t] += d / n;
      m2[t] += d * (s.regret[t] - mean[t]);
      emp_mean[t] += (s.empirical_regret[t] - emp_mean[t]) / n;
    }
    if (s.diverged) ++diverged;
    if (s.diagnostics) {
      if (!diag_sum) {
        diag_sum.emplace();
        for (std::size_t i = 0; i < DiagnosticSeries::kColumns; ++i) {
          diag_sum->column(i).assign(mean.size(), 0.0);
        }
      }
      for (std::size_t i = 0; i < DiagnosticSeries::kColumns; ++i) {
        auto& dst = diag_sum->column(i);
        const auto& src = s.diagnostics->column(i);
        for (std::size_t t = 0; t < dst.size(); ++t) dst[t] += src[t];
      }
    }
    min_pi_sum += s.min_pi_best;
    min_pi_min = std::min(min_pi_min, s.min_pi_best);
    hashes.push_back(s.q_star_hash);
  }

  AgentAggregate finish(std::string name) && {
    AgentAggregate out;
    out.name = std::move(name);
    const double n = static_cast<double>(runs);
    out.ci_half_width.resize(mean.size());
    for (std::size_t t = 0; t < mean.size(); ++t) {
      out.ci_half_width[t] = 1.96 * std::sqrt(std::max(m2[t], 0.0) / (n - 1.0)) / std::sqrt(n);
    }
    out.mean_regret = std::move(mean);
    out.mean_empirical_regret = std::move(emp_mean);
    out.divergence_count = diverged;
    if (diag_sum) {
      for (std::size_t i = 0; i < DiagnosticSeries::kColumns; ++i) {
        for (double& v : diag_sum->column(i)) v /= n;
      }
      out.diagnostics = std::move(diag_sum);
    }
    out.mean_min_pi_best = min_pi_sum / n;
    out.min_min_pi_best = min_pi_min;
    out.q_star_hashes = std::move(hashes);
    return out;
  }
};

constexpr std::size_t kBlockRuns = 32;

}  // namespace

RunAggregate run_many(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  threads = std::max<std::size_t>(threads, 1);
  const std::size_t n_agents = config.agents.size();

  std::vector<Accumulator> acc(n_agents, Accumulator(config.T));
  std::vector<RunSeries> block(n_agents * kBlockRuns);

  for (std::size_t first = 0; first < config.M; first += kBlockRuns) {
    const std::size_t runs = std::min(kBlockRuns, config.M - first);
    const std::size_t tasks = runs * n_agents;
    auto task = [&](std::size_t i) {
      const std::size_t agent = i / runs;
      const std::size_t run = i % runs;
      block[agent * kBlockRuns + run] = run_single(config, config.agents[agent].name, first + run);
    };

    if (threads == 1) {
      for (std::size_t i = 0; i < tasks; ++i) task(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr error;
      std::mutex error_mutex;
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < std::min(threads, tasks); ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < tasks; i = next++) {
            try {
              task(i);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
      }
      pool.clear();
      if (error) std::rethrow_exception(error);
    }

    for (std::size_t a = 0; a < n_agents; ++a) {
      for (std::size_t r = 0; r < runs; ++r) acc[a].add(block[a * kBlockRuns + r]);
    }
  }

  RunAggregate out;
  out.T = config.T;
  out.M = config.M;
  for (std::size_t a = 0; a < n_agents; ++a) {
    out.agents.push_back(std::move(acc[a]).finish(config.agents[a].name));
  }
  return out;
}

double final_window_mean(std::span<const double> series, double fraction) {
  if (series.empty()) throw InvalidArgument("final_window_mean of an empty series");
  const auto n = series.size();
  const auto w = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))), 1, n);
  double s = 0.0;
  for (std::size_t i = n - w; i < n; ++i) s += series[i];
  return s / static_cast<double>(w);
}

std::string_view to_string(RankBy r) {
  return r == RankBy::kTrueRegret ? "true_regret" : "empirical_regret";
}

std::optional<RankBy> rank_by_from_string(std::string_view name) {
  if (name == "true_regret") return RankBy::kTrueRegret;
  if (name == "empirical_regret") return RankBy::kEmpiricalRegret;
  return std::nullopt;
}

Ranking rank_agents(const RunAggregate& aggregate, RankBy by, double window_fraction) {
  if (aggregate.agents.empty()) throw InvalidArgument("nothing to rank");
  Ranking out;
  for (const auto& a : aggregate.agents) {
    const auto& series = by == RankBy::kTrueRegret ? a.mean_regret : a.mean_empirical_regret;
    out.rows.push_back({a.name, final_window_mean(series, window_fraction), a.divergence_count});
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].final_window_mean < out.rows[out.argmin].final_window_mean) out.argmin = i;
  }
  return out;
}

std::string_view to_string(GridAxis::Kind kind) {
  switch (kind) {
    case GridAxis::Kind::kRhoConstant: return "rho_constant";
    case GridAxis::Kind::kRhoLinear: return "rho_linear";
    case GridAxis::Kind::kGammaEntConstant: return "gamma_ent_constant";
  }
  return "unknown";
}

std::optional<GridAxis::Kind> grid_kind_from_string(std::string_view name) {
  for (auto k : {GridAxis::Kind::kRhoConstant, GridAxis::Kind::kRhoLinear,
                 GridAxis::Kind::kGammaEntConstant}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Shortest round-trip form in %g style: 0.0005 rather than 5e-04.
std::string cell_label(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<AgentConfig> expand_grid(const GridAxis& axis) {
  std::vector<AgentConfig> out;
  switch (axis.kind) {
    case GridAxis::Kind::kRhoConstant:
      for (double v : axis.values) {
        PgConfig pg = axis.base;
        pg.rho = ScheduleSpec::constant(v);
        out.push_back({"rho_" + cell_label(v), pg});
      }
      break;
    case GridAxis::Kind::kRhoLinear:
      for (double c1 : axis.c1_values) {
        for (double c2 : axis.c2_values) {
          PgConfig pg = axis.base;
          pg.rho = ScheduleSpec::linear(c1, c2);
          out.push_back({"rho_" + cell_label(c1) + "_c2_" + cell_label(c2), pg});
        }
      }
      break;
    case GridAxis::Kind::kGammaEntConstant:
      for (double v : axis.values) {
        PgConfig pg = axis.base;
        pg.gamma_ent = ScheduleSpec::constant(v);
        out.push_back({"ent_" + cell_label(v), pg});
      }
      break;
  }
  if (out.empty()) throw InvalidArgument("grid is empty");
  return out;
}

GridResult grid_search(ExperimentConfig config, const GridAxis& axis, RankBy by,
                       std::size_t threads) {
  config.agents = expand_grid(axis);
  GridResult out{run_many(config, threads), {}};
  out.ranking = rank_agents(out.aggregate, by);
  return out;
}

}  // namespace banditlab
