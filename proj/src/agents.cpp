#include "banditlab/agents.hpp"

#include <algorithm>
#include <limits>

#include "banditlab/errors.hpp"

namespace banditlab {

std::string_view to_string(EntropyEstimator e) {
  return e == EntropyEstimator::kSampledAction ? "sampled_action" : "componentwise";
}

std::optional<EntropyEstimator> entropy_estimator_from_string(std::string_view name) {
  if (name == "sampled_action") return EntropyEstimator::kSampledAction;
  if (name == "componentwise") return EntropyEstimator::kComponentwise;
  return std::nullopt;
}

PreferenceVector H0Spec::build(std::size_t k) const {
  switch (kind) {
    case Kind::kZeros:
      return PreferenceVector::zeros(k);
    case Kind::kBiased:
      return PreferenceVector::biased(k, value);
    case Kind::kExplicit:
      if (values.size() != k) {
        throw InvalidArgument("explicit h0 has " + std::to_string(values.size()) +
                              " entries, expected " + std::to_string(k));
      }
      return PreferenceVector(values);
  }
  throw InvalidArgument("unknown h0 kind");
}

PgAgentState make_pg_state(const PgConfig& config, std::size_t k, std::size_t horizon) {
  PgAgentState s{
      .h = config.h0.build(k),
      .reward_baseline = 0.0,
      .step = 0,
      .rho = Schedule(config.rho, horizon),
      .gamma_l2 = std::nullopt,
      .gamma_ent = std::nullopt,
      .use_baseline = config.use_baseline,
      .entropy_one_plus_log = config.entropy_one_plus_log,
      .entropy_estimator = config.entropy_estimator,
  };
  if (config.gamma_l2) s.gamma_l2.emplace(*config.gamma_l2, horizon);
  if (config.gamma_ent) s.gamma_ent.emplace(*config.gamma_ent, horizon);
  return s;
}

std::size_t sample_index(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (probs[a] > 0.0) last_positive = a;
    cdf += probs[a];
    if (u < cdf) return a;
  }
  // Rounding left the cumulative sum just under u.
  return last_positive;
}

std::size_t pg_sample_action(const PgAgentState& state, RngStream& rng) {
  std::vector<double> pi(state.h.size());
  softmax_into(state.h.values(), pi);
  return sample_index(pi, rng);
}

void pg_gradient_kernel(std::span<const double> h, std::span<const double> pi,
                        std::size_t action, double advantage, double gamma_l2,
                        double gamma_ent, bool one_plus_log, EntropyEstimator estimator,
                        std::span<double> out) {
  const std::size_t k = h.size();
  if (gamma_ent == 0.0) {
    for (std::size_t a = 0; a < k; ++a) {
      const double indicator = a == action ? 1.0 : 0.0;
      out[a] = advantage * (indicator - pi[a]) - gamma_l2 * h[a];
    }
    return;
  }
  const double c = one_plus_log ? 1.0 : 0.0;
  auto log_pi = [&](std::size_t a) { return std::log(std::max(pi[a], 1e-300)); };
  const double sampled_bonus = gamma_ent * (c + log_pi(action));
  for (std::size_t a = 0; a < k; ++a) {
    const double indicator = a == action ? 1.0 : 0.0;
    const double bonus = estimator == EntropyEstimator::kSampledAction
                             ? sampled_bonus
                             : gamma_ent * (c + log_pi(a));
    out[a] = (advantage - bonus) * (indicator - pi[a]) - gamma_l2 * h[a];
  }
}

namespace {

void check_action(const PgAgentState& state, std::size_t action) {
  if (action >= state.h.size()) throw InvalidArgument("action out of range");
}

double advantage_of(const PgAgentState& state, double reward) {
  return state.use_baseline ? reward - state.reward_baseline : reward;
}

}  // namespace

std::vector<double> pg_stochastic_gradient(const PgAgentState& state, std::size_t action,
                                           double reward) {
  check_action(state, action);
  const std::size_t k = state.h.size();
  std::vector<double> pi(k);
  softmax_into(state.h.values(), pi);
  std::vector<double> g(k);
  pg_gradient_kernel(state.h.values(), pi, action, advantage_of(state, reward),
                     state.gamma_l2_at_step(), state.gamma_ent_at_step(),
                     state.entropy_one_plus_log, state.entropy_estimator, g);
  return g;
}

double baseline_after(const PgAgentState& state, double reward) {
  return state.reward_baseline +
         (reward - state.reward_baseline) / static_cast<double>(state.step + 1);
}

void pg_step(PgAgentState& state, std::span<const double> pi, std::size_t action,
             double reward, std::span<double> scratch) {
  const std::size_t k = state.h.size();
  const std::span<const double> h = state.h.values();
  pg_gradient_kernel(h, pi, action, advantage_of(state, reward), state.gamma_l2_at_step(),
                     state.gamma_ent_at_step(), state.entropy_one_plus_log,
                     state.entropy_estimator, scratch);
  const double rho = state.rho.at(state.step);
  bool ok = true;
  for (std::size_t a = 0; a < k; ++a) {
    scratch[a] = h[a] + rho * scratch[a];
    if (!std::isfinite(scratch[a]) || std::abs(scratch[a]) > kDivergenceThreshold) ok = false;
  }
  if (!ok) throw DivergenceError(state.step, std::sqrt(state.h.norm_sq()));
  state.h.assign(scratch.first(k));
  state.reward_baseline = baseline_after(state, reward);
  ++state.step;
}

PgAgentState pg_update(const PgAgentState& state, std::size_t action, double reward) {
  check_action(state, action);
  PgAgentState next = state;
  std::vector<double> pi(state.h.size());
  std::vector<double> scratch(state.h.size());
  softmax_into(state.h.values(), pi);
  pg_step(next, pi, action, reward, scratch);
  return next;
}

// UCB1 -----------------------------------------------------------------------

UcbState make_ucb_state(std::size_t k, double explore_c) {
  if (k < 2) throw InvalidArgument("UCB needs k >= 2");
  if (!(explore_c > 0.0) || !std::isfinite(explore_c)) {
    throw InvalidArgument("explore_c must be finite and > 0");
  }
  return UcbState{std::vector<std::uint64_t>(k, 0), std::vector<double>(k, 0.0), 0, explore_c};
}

std::size_t ucb_select(const UcbState& state) {
  const std::size_t k = state.counts.size();
  for (std::size_t a = 0; a < k; ++a) {
    if (state.counts[a] == 0) return a;
  }
  const double log_t = std::log(static_cast<double>(state.step));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    const double score =
        state.means[a] +
        state.explore_c * std::sqrt(log_t / static_cast<double>(state.counts[a]));
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

void ucb_step(UcbState& state, std::size_t action, double reward) {
  if (action >= state.counts.size()) throw InvalidArgument("action out of range");
  const auto n = ++state.counts[action];
  state.means[action] += (reward - state.means[action]) / static_cast<double>(n);
  ++state.step;
}

UcbState ucb_update(const UcbState& state, std::size_t action, double reward) {
  UcbState next = state;
  ucb_step(next, action, reward);
  return next;
}

}  // namespace banditlab
