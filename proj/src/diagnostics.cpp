#include "banditlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "banditlab/errors.hpp"

namespace banditlab {

std::vector<double>& DiagnosticSeries::column(std::size_t i) {
  return const_cast<std::vector<double>&>(std::as_const(*this).column(i));
}

const std::vector<double>& DiagnosticSeries::column(std::size_t i) const {
  switch (i) {
    case 0: return grad_lgamma_norm_sq;
    case 1: return grad_l0_norm_sq;
    case 2: return gamma_h_norm_sq;
    case 3: return pi_best;
    case 4: return dist_dirac;
    case 5: return policy_regret;
    case 6: return avg_policy_regret;
    case 7: return lambda_T;
    case 8: return weighted_grad_partial;
    case 9: return running_mean_grad;
    default: break;
  }
  throw InvalidArgument("diagnostic column out of range");
}

DiagnosticTracker::DiagnosticTracker(ArmStats stats, std::size_t expected_steps)
    : stats_(std::move(stats)),
      policy_sum_(stats_.size(), 0.0),
      avg_(stats_.size(), 0.0),
      grad_(stats_.size(), 0.0) {
  for (std::size_t i = 0; i < DiagnosticSeries::kColumns; ++i) {
    series_.column(i).reserve(expected_steps);
  }
}

void DiagnosticTracker::record(std::span<const double> h, std::span<const double> pi,
                               double rho, double gamma) {
  const std::size_t k = stats_.size();
  const auto q = stats_.q_star();

  grad_l0_into(pi, q, grad_);
  const double g0 = norm_sq(grad_);
  double g_gamma = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    const double d = grad_[a] - gamma * h[a];
    g_gamma += d * d;
  }
  const double h_sq = norm_sq(h);

  for (std::size_t a = 0; a < k; ++a) policy_sum_[a] += pi[a];
  const double n = static_cast<double>(series_.size() + 1);
  for (std::size_t a = 0; a < k; ++a) avg_[a] = policy_sum_[a] / n;

  lambda_ += rho;
  weighted_ += rho * g_gamma;
  const double best = pi[stats_.best_arm()];
  min_pi_best_ = std::min(min_pi_best_, best);

  series_.grad_lgamma_norm_sq.push_back(g_gamma);
  series_.grad_l0_norm_sq.push_back(g0);
  series_.gamma_h_norm_sq.push_back(gamma * gamma * h_sq);
  series_.pi_best.push_back(best);
  series_.dist_dirac.push_back(dist_to_dirac_set_of(pi));
  series_.policy_regret.push_back(regret_of(pi, q, stats_.best_value()));
  series_.avg_policy_regret.push_back(regret_of(avg_, q, stats_.best_value()));
  series_.lambda_T.push_back(lambda_);
  series_.weighted_grad_partial.push_back(weighted_);
  series_.running_mean_grad.push_back(weighted_ / lambda_);
}

void DiagnosticTracker::pad_to(std::size_t n) {
  if (series_.size() == 0) return;
  for (std::size_t i = 0; i < DiagnosticSeries::kColumns; ++i) {
    auto& col = series_.column(i);
    if (col.size() < n) col.resize(n, col.back());
  }
}

DiagnosticSeries track(std::span<const PreferenceVector> trajectory, const ArmStats& stats,
                       const Schedule& rho, const std::optional<Schedule>& gamma) {
  DiagnosticTracker tracker(stats, trajectory.size());
  std::vector<double> pi(stats.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const PreferenceVector& h = trajectory[t];
    if (h.size() != stats.size()) throw InvalidArgument("trajectory size mismatch");
    softmax_into(h.values(), pi);
    tracker.record(h.values(), pi, rho.at(t), gamma ? gamma->at(t) : 0.0);
  }
  return std::move(tracker).take();
}

namespace {

bool holds(double lhs, double rhs) { return lhs >= rhs - 1e-12 * (1.0 + std::abs(rhs)); }

void require_gap(const ArmStats& stats) {
  if (!stats.means_distinct()) {
    throw PreconditionError("inequality checks need distinct arm means (gap > 0)");
  }
}

}  // namespace

double regret_distance_slack(const Policy& policy, const ArmStats& stats) {
  require_gap(stats);
  const double r = regret(policy, stats);
  const double d = dist_to_dirac(policy, stats.best_arm());
  const double delta = stats.gap();
  return r * r - 0.5 * delta * delta * d * d;
}

InequalityReport check_inequalities(const PreferenceVector& h, const ArmStats& stats) {
  require_gap(stats);
  const Policy pi = softmax(h);
  const std::vector<double> g = grad_l0(h, stats);
  const double g_norm_sq = norm_sq(g);
  const double g_norm = std::sqrt(g_norm_sq);
  const double r = regret(pi, stats);
  const double delta = stats.gap();
  const double k = static_cast<double>(stats.size());

  InequalityReport rep;
  {
    const double rhs = pi[stats.best_arm()] * r;
    rep.gradient_regret_slack = g_norm - rhs;
    rep.gradient_regret_holds = holds(g_norm, rhs);
  }
  {
    const double d = dist_to_dirac_set(pi);
    const double rhs = delta * delta / (8.0 * (k - 1.0)) * d * d;
    rep.gradient_distance_slack = g_norm_sq - rhs;
    rep.gradient_distance_holds = holds(g_norm_sq, rhs);
  }
  {
    const double d = dist_to_dirac(pi, stats.best_arm());
    const double rhs = 0.5 * delta * delta * d * d;
    rep.regret_distance_slack = r * r - rhs;
    rep.regret_distance_holds = holds(r * r, rhs);
  }
  return rep;
}

ConvergenceReport convergence_report(const DiagnosticSeries& series,
                                     std::optional<HypothesisReport> schedules) {
  const std::size_t n = series.size();
  if (n < 100) throw PreconditionError("convergence_report needs at least 100 steps");

  auto at_fraction = [n](double f) {
    const auto idx = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n)));
    return idx == 0 ? std::size_t{0} : std::min(idx, n) - 1;
  };

  ConvergenceReport rep;
  rep.length = n;
  rep.running_mean_grad_10 = series.running_mean_grad[at_fraction(0.1)];
  rep.running_mean_grad_50 = series.running_mean_grad[at_fraction(0.5)];
  rep.running_mean_grad_100 = series.running_mean_grad[n - 1];

  const auto& gh = series.gamma_h_norm_sq;
  const auto it = std::max_element(gh.begin(), gh.end());
  rep.max_gamma_h_norm_sq = *it;
  rep.argmax_gamma_h_norm_sq = static_cast<std::size_t>(it - gh.begin());

  rep.t0 = schedules ? static_cast<std::size_t>(std::min<std::uint64_t>(schedules->t0, n - 1)) : 0;
  rep.gamma_h_norm_sq_at_t0 = gh[rep.t0];
  rep.avg_policy_regret_initial = series.avg_policy_regret.front();
  rep.avg_policy_regret_final = series.avg_policy_regret.back();
  rep.schedules = std::move(schedules);
  return rep;
}

}  // namespace banditlab
