#pragma once

// Deterministic step-size and regularization schedules indexed from t = 0.
//
//   constant        c1
//   linear          c1 / (1 + c2 t)
//   power           c1 / (1 + c2 t^alpha)
//   log             c1 / (1 + c2 log(1 + t))
//   loglog          c1 / (1 + c2 log(1 + log(1 + t)))
//   cumulative_rho  c1 / (c2 + sum_{tau < t} rho_tau), rho given by `companion`

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace banditlab {

enum class ScheduleKind { kConstant, kLinear, kPower, kLog, kLogLog, kCumulativeRho };

std::string_view to_string(ScheduleKind kind);
std::optional<ScheduleKind> schedule_kind_from_string(std::string_view name);

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::kConstant;
  double c1 = 1.0;
  double c2 = 0.0;
  double alpha = 1.0;
  // Only for kCumulativeRho: the rho schedule being integrated.
  std::shared_ptr<const ScheduleSpec> companion;

  static ScheduleSpec constant(double c1);
  static ScheduleSpec linear(double c1, double c2);
  static ScheduleSpec power(double c1, double c2, double alpha);
  static ScheduleSpec log(double c1, double c2);
  static ScheduleSpec loglog(double c1, double c2);
  static ScheduleSpec cumulative_rho(double c1, double c2, ScheduleSpec rho);

  // Throws ScheduleError when the parameters violate the family's domain.
  void validate() const;
};

bool operator==(const ScheduleSpec& lhs, const ScheduleSpec& rhs);

// Value at index t. Throws ScheduleError for an invalid spec or a result that
// is not finite and strictly positive. O(t) for cumulative_rho.
double eval(const ScheduleSpec& spec, std::uint64_t t);

// Values for t = 0 .. n-1 in O(n).
std::vector<double> tabulate(const ScheduleSpec& spec, std::size_t n);

// A spec with a precomputed prefix. Copies share the table.
class Schedule {
 public:
  explicit Schedule(ScheduleSpec spec, std::size_t precompute = 0);

  double at(std::uint64_t t) const {
    return t < table_->size() ? (*table_)[t] : eval(spec_, t);
  }
  const ScheduleSpec& spec() const noexcept { return spec_; }

 private:
  ScheduleSpec spec_;
  std::shared_ptr<const std::vector<double>> table_;
};

// Asymptotic status of a hypothesis that a finite scan cannot decide; derived
// from the family instead.
enum class HypothesisStatus { kSatisfied, kViolated, kUndetermined };

std::string_view to_string(HypothesisStatus status);

// sum rho = inf and sum rho^2 < inf.
HypothesisStatus classify_rho(const ScheduleSpec& rho);
// gamma decreasing with limit 0.
HypothesisStatus classify_gamma(const ScheduleSpec& gamma);

struct HypothesisReport {
  std::uint64_t horizon = 0;
  bool gamma_decreasing = false;
  // First index from which rho_t gamma_t <= 1 for every scanned t.
  std::uint64_t t0 = 0;
  bool t0_found = false;
  // inf_{t < T} (gamma_t - gamma_{t+1}) / (rho_t gamma_t^2): the largest
  // admissible c in c rho_t gamma_t^2 <= gamma_t - gamma_{t+1} on the horizon.
  double c_rho_gamma_inf = 0.0;
  std::uint64_t c_rho_gamma_argmin = 0;
  double sum_rho = 0.0;
  double sum_rho_sq = 0.0;
  double sum_rho_gamma = 0.0;
  // sum_{t < T} rho_t (sum_{tau < t} rho_tau)^2 gamma_t^2
  double cv_pi_partial_sum = 0.0;
  HypothesisStatus rho_hypothesis = HypothesisStatus::kUndetermined;
  HypothesisStatus gamma_hypothesis = HypothesisStatus::kUndetermined;
};

HypothesisReport certify(const ScheduleSpec& rho, const ScheduleSpec& gamma,
                         std::uint64_t horizon);

}  // namespace banditlab
