#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "banditlab/policy_core.hpp"
#include "banditlab/rewards.hpp"
#include "banditlab/schedules.hpp"

namespace banditlab {

// Abort threshold on |H|_inf.
inline constexpr double kDivergenceThreshold = 1e6;

// How the stochastic entropy-bonus gradient is formed.
//
// kSampledAction: gamma_ent (c + log Pi(A_t)) scales (1_{A_t} - Pi), the
//   score-function estimator whose conditional mean is gamma_ent grad Omega.
// kComponentwise (default): gamma_ent (c + log Pi(a)) multiplies (1_{a=A_t} - Pi(a))
//   entry by entry. Its entropy part has zero conditional mean.
enum class EntropyEstimator { kSampledAction, kComponentwise };

std::string_view to_string(EntropyEstimator e);
std::optional<EntropyEstimator> entropy_estimator_from_string(std::string_view name);

struct H0Spec {
  enum class Kind { kZeros, kBiased, kExplicit };
  Kind kind = Kind::kBiased;
  double value = 5.0;           // kBiased: H0 = (value, 0, ..., 0)
  std::vector<double> values;   // kExplicit

  PreferenceVector build(std::size_t k) const;
};

struct PgConfig {
  ScheduleSpec rho = ScheduleSpec::constant(0.1);
  std::optional<ScheduleSpec> gamma_l2;
  std::optional<ScheduleSpec> gamma_ent;
  H0Spec h0;
  bool use_baseline = true;
  // Use c = 1 in (c + log Pi) instead of the c = 0 replacement.
  bool entropy_one_plus_log = false;
  EntropyEstimator entropy_estimator = EntropyEstimator::kComponentwise;
};

struct UcbConfig {
  double explore_c = std::sqrt(2.0);
};

struct AgentConfig {
  std::string name;
  std::variant<PgConfig, UcbConfig> params;

  bool is_pg() const noexcept { return std::holds_alternative<PgConfig>(params); }
};

// Softmax policy-gradient agent ----------------------------------------------

struct PgAgentState {
  PreferenceVector h;
  // Mean of R_0 .. R_{step-1}; 0 before the first reward.
  double reward_baseline = 0.0;
  std::uint64_t step = 0;
  Schedule rho;
  std::optional<Schedule> gamma_l2;
  std::optional<Schedule> gamma_ent;
  bool use_baseline = true;
  bool entropy_one_plus_log = false;
  EntropyEstimator entropy_estimator = EntropyEstimator::kComponentwise;

  double gamma_l2_at_step() const { return gamma_l2 ? gamma_l2->at(step) : 0.0; }
  double gamma_ent_at_step() const { return gamma_ent ? gamma_ent->at(step) : 0.0; }
};

// `horizon` sizes the schedule tables; later steps fall back to eval().
PgAgentState make_pg_state(const PgConfig& config, std::size_t k, std::size_t horizon = 0);

// Inverse-CDF draw from a probability vector.
std::size_t sample_index(std::span<const double> probs, RngStream& rng);

std::size_t pg_sample_action(const PgAgentState& state, RngStream& rng);

// g_t(a) = [adv - gamma_ent (c + log Pi)] (1_{a=A} - Pi(a)) - gamma_l2 H(a),
// with the entropy bracket omitted entirely when gamma_ent == 0.
void pg_gradient_kernel(std::span<const double> h, std::span<const double> pi,
                        std::size_t action, double advantage, double gamma_l2,
                        double gamma_ent, bool one_plus_log, EntropyEstimator estimator,
                        std::span<double> out);

std::vector<double> pg_stochastic_gradient(const PgAgentState& state, std::size_t action,
                                           double reward);

double baseline_after(const PgAgentState& state, double reward);

PgAgentState pg_update(const PgAgentState& state, std::size_t action, double reward);

// In-place step given the current policy pi = softmax(H_t). `scratch` must
// hold k doubles. Throws DivergenceError when H_{t+1} is non-finite or
// exceeds kDivergenceThreshold; the state is left at H_t in that case.
void pg_step(PgAgentState& state, std::span<const double> pi, std::size_t action,
             double reward, std::span<double> scratch);

// UCB1 -----------------------------------------------------------------------

struct UcbState {
  std::vector<std::uint64_t> counts;
  std::vector<double> means;
  std::uint64_t step = 0;
  double explore_c = std::sqrt(2.0);
};

UcbState make_ucb_state(std::size_t k, double explore_c = std::sqrt(2.0));

// Lowest-index unpulled arm first, then argmax means(a) + c sqrt(ln t / n_a)
// with ties to the lowest index.
std::size_t ucb_select(const UcbState& state);

UcbState ucb_update(const UcbState& state, std::size_t action, double reward);
void ucb_step(UcbState& state, std::size_t action, double reward);

}  // namespace banditlab
