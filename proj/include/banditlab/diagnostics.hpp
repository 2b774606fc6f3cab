#pragma once

// Per-step theory-facing quantities, computed exactly from H_t, q* and the
// schedules (no sampling), plus the three inequalities used to move from a
// vanishing gradient to a vanishing regret.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "banditlab/policy_core.hpp"
#include "banditlab/schedules.hpp"

namespace banditlab {

struct DiagnosticSeries {
  std::vector<double> grad_lgamma_norm_sq;   // |grad L_{gamma_t}(H_t)|^2
  std::vector<double> grad_l0_norm_sq;       // |grad L_0(H_t)|^2
  std::vector<double> gamma_h_norm_sq;       // gamma_t^2 |H_t|^2
  std::vector<double> pi_best;               // Pi_{H_t}(a*)
  std::vector<double> dist_dirac;            // |Pi_{H_t} - D|
  std::vector<double> policy_regret;         // R(Pi_{H_t})
  std::vector<double> avg_policy_regret;     // R(mean of Pi_{H_0..H_t})
  std::vector<double> lambda_T;              // sum_{tau <= t} rho_tau
  std::vector<double> weighted_grad_partial; // sum_{tau <= t} rho_tau |grad L_{gamma_tau}|^2
  std::vector<double> running_mean_grad;     // weighted_grad_partial / lambda_T

  static constexpr std::size_t kColumns = 10;
  static constexpr std::array<std::string_view, kColumns> kColumnNames = {
      "grad_lgamma_norm_sq", "grad_l0_norm_sq", "gamma_h_norm_sq", "pi_best",
      "dist_dirac",          "policy_regret",   "avg_policy_regret", "lambda_T",
      "weighted_grad_partial", "running_mean_grad"};

  std::size_t size() const noexcept { return lambda_T.size(); }
  std::vector<double>& column(std::size_t i);
  const std::vector<double>& column(std::size_t i) const;
};

// Accumulates a DiagnosticSeries one step at a time during a run.
class DiagnosticTracker {
 public:
  explicit DiagnosticTracker(ArmStats stats, std::size_t expected_steps = 0);

  // Records step t from H_t, Pi_{H_t} and the schedule values at t.
  void record(std::span<const double> h, std::span<const double> pi, double rho,
              double gamma);
  // Repeats the last recorded row until the series has n rows.
  void pad_to(std::size_t n);

  const DiagnosticSeries& series() const noexcept { return series_; }
  DiagnosticSeries take() && { return std::move(series_); }
  // Smallest Pi_{H_t}(a*) seen so far (1 before any record).
  double min_pi_best() const noexcept { return min_pi_best_; }

 private:
  ArmStats stats_;
  DiagnosticSeries series_;
  std::vector<double> policy_sum_;
  std::vector<double> avg_;
  std::vector<double> grad_;
  double lambda_ = 0.0;
  double weighted_ = 0.0;
  double min_pi_best_ = 1.0;
};

// Diagnostics of a given trajectory H_0, H_1, ... . Absent gamma means 0.
DiagnosticSeries track(std::span<const PreferenceVector> trajectory, const ArmStats& stats,
                       const Schedule& rho, const std::optional<Schedule>& gamma);

struct InequalityReport {
  // (i)   |grad L0| >= Pi(a*) R(Pi)
  bool gradient_regret_holds = false;
  double gradient_regret_slack = 0.0;
  // (ii)  |grad L0|^2 >= Delta^2 / (8 (k-1)) |Pi - D|^2
  bool gradient_distance_holds = false;
  double gradient_distance_slack = 0.0;
  // (iii) R(Pi)^2 >= Delta^2 / 2 |Pi - delta_{a*}|^2
  bool regret_distance_holds = false;
  double regret_distance_slack = 0.0;

  bool all_hold() const noexcept {
    return gradient_regret_holds && gradient_distance_holds && regret_distance_holds;
  }
};

// Requires stats.gap() > 0; throws PreconditionError otherwise. An inequality
// "holds" when lhs >= rhs - 1e-12 (1 + |rhs|).
InequalityReport check_inequalities(const PreferenceVector& h, const ArmStats& stats);

// Slack of (iii) for an arbitrary policy; same precondition.
double regret_distance_slack(const Policy& policy, const ArmStats& stats);

struct ConvergenceReport {
  std::size_t length = 0;
  double running_mean_grad_10 = 0.0;
  double running_mean_grad_50 = 0.0;
  double running_mean_grad_100 = 0.0;
  double max_gamma_h_norm_sq = 0.0;
  std::size_t argmax_gamma_h_norm_sq = 0;
  std::size_t t0 = 0;
  double gamma_h_norm_sq_at_t0 = 0.0;
  double avg_policy_regret_initial = 0.0;
  double avg_policy_regret_final = 0.0;
  std::optional<HypothesisReport> schedules;
};

// Requires series.size() >= 100; throws PreconditionError otherwise. t0 is
// taken from the schedule report when present, else 0.
ConvergenceReport convergence_report(const DiagnosticSeries& series,
                                     std::optional<HypothesisReport> schedules = std::nullopt);

}  // namespace banditlab
