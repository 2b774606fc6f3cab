#include "banditlab/policy_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgument(std::string(what) + ": entry " + std::to_string(i) +
                            " is not finite");
    }
  }
}

void require_same_size(std::size_t lhs, std::size_t rhs) {
  if (lhs != rhs) {
    throw InvalidArgument("size mismatch: " + std::to_string(lhs) + " vs " +
                          std::to_string(rhs));
  }
}

void require_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("gamma must be finite and >= 0");
  }
}

}  // namespace

// PreferenceVector -----------------------------------------------------------

PreferenceVector::PreferenceVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw InvalidArgument("preference vector needs k >= 2");
  require_finite(values_, "preference vector");
}

PreferenceVector PreferenceVector::zeros(std::size_t k) {
  return PreferenceVector(std::vector<double>(k, 0.0));
}

PreferenceVector PreferenceVector::biased(std::size_t k, double value) {
  std::vector<double> v(k, 0.0);
  if (k > 0) v[0] = value;
  return PreferenceVector(std::move(v));
}

void PreferenceVector::assign(std::span<const double> values) {
  require_same_size(values.size(), values_.size());
  require_finite(values, "preference vector");
  std::copy(values.begin(), values.end(), values_.begin());
}

double PreferenceVector::norm_sq() const noexcept { return banditlab::norm_sq(values_); }

double PreferenceVector::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// Policy ---------------------------------------------------------------------

Policy::Policy(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw InvalidArgument("policy needs k >= 2");
  require_finite(probs_, "policy");
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw InvalidArgument("policy has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidArgument("policy entries sum to " + std::to_string(sum));
  }
}

Policy Policy::uniform(std::size_t k) {
  return Policy(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Policy Policy::dirac(std::size_t k, std::size_t arm) {
  if (arm >= k) throw InvalidArgument("dirac arm out of range");
  std::vector<double> p(k, 0.0);
  p[arm] = 1.0;
  return Policy(std::move(p));
}

// ArmStats -------------------------------------------------------------------

ArmStats::ArmStats(std::vector<double> q_star) : q_star_(std::move(q_star)) {
  if (q_star_.size() < 2) throw InvalidArgument("need k >= 2 arms");
  require_finite(q_star_, "q_star");
  best_arm_ = static_cast<std::size_t>(
      std::max_element(q_star_.begin(), q_star_.end()) - q_star_.begin());

  std::vector<double> sorted = q_star_;
  std::sort(sorted.begin(), sorted.end());
  double gap = sorted[1] - sorted[0];
  for (std::size_t i = 1; i + 1 < sorted.size(); ++i) {
    gap = std::min(gap, sorted[i + 1] - sorted[i]);
  }
  gap_ = gap > 0.0 ? gap : 0.0;
}

// Kernels --------------------------------------------------------------------

void softmax_into(std::span<const double> h, std::span<double> out) noexcept {
  const double shift = *std::max_element(h.begin(), h.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    out[a] = std::exp(h[a] - shift);
    sum += out[a];
  }
  const double inv = 1.0 / sum;
  for (double& p : out) p *= inv;
}

double expected_value(std::span<const double> pi, std::span<const double> q) noexcept {
  double s = 0.0;
  for (std::size_t a = 0; a < pi.size(); ++a) s += pi[a] * q[a];
  return s;
}

void grad_l0_into(std::span<const double> pi, std::span<const double> q,
                  std::span<double> out) noexcept {
  const double mean = expected_value(pi, q);
  for (std::size_t a = 0; a < pi.size(); ++a) out[a] = pi[a] * (q[a] - mean);
}

double regret_of(std::span<const double> pi, std::span<const double> q,
                 double q_max) noexcept {
  double r = 0.0;
  for (std::size_t a = 0; a < pi.size(); ++a) r += pi[a] * (q_max - q[a]);
  return r;
}

double dist_to_dirac_of(std::span<const double> pi, std::size_t arm) noexcept {
  double s = 0.0;
  for (std::size_t a = 0; a < pi.size(); ++a) {
    const double d = (a == arm) ? 1.0 - pi[a] : pi[a];
    s += d * d;
  }
  return std::sqrt(s);
}

double dist_to_dirac_set_of(std::span<const double> pi) noexcept {
  // |Pi - delta_a|^2 = |Pi|^2 - 2 Pi(a) + 1 is smallest at the most likely arm.
  const auto arm = static_cast<std::size_t>(std::max_element(pi.begin(), pi.end()) - pi.begin());
  return dist_to_dirac_of(pi, arm);
}

double norm_sq(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm(std::span<const double> v) noexcept { return std::sqrt(norm_sq(v)); }

// Typed API ------------------------------------------------------------------

Policy softmax(const PreferenceVector& h) {
  std::vector<double> p(h.size());
  softmax_into(h.values(), p);
  return Policy(std::move(p));
}

double objective_l_gamma(const PreferenceVector& h, const ArmStats& stats, double gamma) {
  require_gamma(gamma);
  require_same_size(h.size(), stats.size());
  std::vector<double> p(h.size());
  softmax_into(h.values(), p);
  return expected_value(p, stats.q_star()) - 0.5 * gamma * h.norm_sq();
}

std::vector<double> grad_l0(const PreferenceVector& h, const ArmStats& stats) {
  require_same_size(h.size(), stats.size());
  std::vector<double> p(h.size());
  softmax_into(h.values(), p);
  std::vector<double> g(h.size());
  grad_l0_into(p, stats.q_star(), g);
  return g;
}

std::vector<double> grad_l_gamma(const PreferenceVector& h, const ArmStats& stats,
                                 double gamma) {
  require_gamma(gamma);
  std::vector<double> g = grad_l0(h, stats);
  for (std::size_t a = 0; a < g.size(); ++a) g[a] -= gamma * h[a];
  return g;
}

double regret(const Policy& policy, const ArmStats& stats) {
  require_same_size(policy.size(), stats.size());
  return regret_of(policy.probs(), stats.q_star(), stats.best_value());
}

double dist_to_dirac(const Policy& policy, std::size_t arm) {
  if (arm >= policy.size()) throw InvalidArgument("arm out of range");
  return dist_to_dirac_of(policy.probs(), arm);
}

double dist_to_dirac_set(const Policy& policy) { return dist_to_dirac_set_of(policy.probs()); }

double entropy(const Policy& policy) {
  double s = 0.0;
  for (double p : policy.probs()) {
    const double clamped = std::max(p, 1e-300);
    s -= p * std::log(clamped);
  }
  return s;
}

}  // namespace banditlab
