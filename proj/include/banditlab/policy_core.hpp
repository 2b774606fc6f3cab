#pragma once

// Closed-form quantities of the softmax bandit objective: policy, L2-penalized
// value, exact gradients, regret and distances to the one-hot policies.
//
// Typed entry points validate their inputs. The `*_into` kernels work on raw
// spans and are what the training loop calls once per step; they assume sizes
// already agree.

#include <cstddef>
#include <span>
#include <vector>

namespace banditlab {

// Agent parameter H in R^k. Always k >= 2 and finite.
class PreferenceVector {
 public:
  explicit PreferenceVector(std::vector<double> values);

  static PreferenceVector zeros(std::size_t k);
  // H0 = (value, 0, ..., 0).
  static PreferenceVector biased(std::size_t k, double value);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t a) const { return values_[a]; }

  // Overwrites the entries in place; same validation as the constructor.
  void assign(std::span<const double> values);

  double norm_sq() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

 private:
  std::vector<double> values_;
};

// A probability vector over k arms. Entries are nonnegative and sum to one
// within 1e-12. Softmax images are strictly positive up to underflow; the
// closure (one-hot policies) is admitted so Dirac masses can be represented.
class Policy {
 public:
  explicit Policy(std::vector<double> probs);

  static Policy uniform(std::size_t k);
  static Policy dirac(std::size_t k, std::size_t arm);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t a) const { return probs_[a]; }

 private:
  std::vector<double> probs_;
};

// Mean rewards q*, the best arm and the minimal pairwise gap.
//
// best_arm is the lowest-index maximizer. gap is min_{a != b} |q*(a) - q*(b)|
// when all means are distinct and exactly 0 otherwise, so callers that need
// distinct means check gap() > 0.
class ArmStats {
 public:
  explicit ArmStats(std::vector<double> q_star);

  std::size_t size() const noexcept { return q_star_.size(); }
  std::span<const double> q_star() const noexcept { return q_star_; }
  double operator[](std::size_t a) const { return q_star_[a]; }
  std::size_t best_arm() const noexcept { return best_arm_; }
  double best_value() const noexcept { return q_star_[best_arm_]; }
  double gap() const noexcept { return gap_; }
  bool means_distinct() const noexcept { return gap_ > 0.0; }

 private:
  std::vector<double> q_star_;
  std::size_t best_arm_ = 0;
  double gap_ = 0.0;
};

Policy softmax(const PreferenceVector& h);

// <q*, Pi_H> - (gamma / 2) |H|^2.
double objective_l_gamma(const PreferenceVector& h, const ArmStats& stats, double gamma);

// Pi_H (.) (q* - <Pi_H, q*>).
std::vector<double> grad_l0(const PreferenceVector& h, const ArmStats& stats);

// grad_l0 - gamma H.
std::vector<double> grad_l_gamma(const PreferenceVector& h, const ArmStats& stats,
                                 double gamma);

// max_a q*(a) - <q*, Pi>, accumulated as sum_a Pi(a) (max q* - q*(a)) so the
// result is never negative.
double regret(const Policy& policy, const ArmStats& stats);

// |Pi - delta_arm|.
double dist_to_dirac(const Policy& policy, std::size_t arm);

// min_a |Pi - delta_a|.
double dist_to_dirac_set(const Policy& policy);

// Shannon entropy with 0 log 0 = 0.
double entropy(const Policy& policy);

double norm(std::span<const double> v) noexcept;
double norm_sq(std::span<const double> v) noexcept;

// Span kernels ---------------------------------------------------------------

void softmax_into(std::span<const double> h, std::span<double> out) noexcept;
double expected_value(std::span<const double> pi, std::span<const double> q) noexcept;
void grad_l0_into(std::span<const double> pi, std::span<const double> q,
                  std::span<double> out) noexcept;
double regret_of(std::span<const double> pi, std::span<const double> q,
                 double q_max) noexcept;
double dist_to_dirac_of(std::span<const double> pi, std::size_t arm) noexcept;
double dist_to_dirac_set_of(std::span<const double> pi) noexcept;

}  // namespace banditlab
