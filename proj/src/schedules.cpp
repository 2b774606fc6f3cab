#include "banditlab/schedules.hpp"

#include <cmath>
#include <limits>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

double closed_form(const ScheduleSpec& s, double t) {
  switch (s.kind) {
    case ScheduleKind::kConstant:
      return s.c1;
    case ScheduleKind::kLinear:
      return s.c1 / (1.0 + s.c2 * t);
    case ScheduleKind::kPower:
      return s.c1 / (1.0 + s.c2 * std::pow(t, s.alpha));
    case ScheduleKind::kLog:
      return s.c1 / (1.0 + s.c2 * std::log1p(t));
    case ScheduleKind::kLogLog:
      return s.c1 / (1.0 + s.c2 * std::log1p(std::log1p(t)));
    case ScheduleKind::kCumulativeRho:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double checked(double v, std::uint64_t t) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ScheduleError("schedule value at t=" + std::to_string(t) +
                        " is not finite and positive");
  }
  return v;
}

// Status of "sum_t value_t = infinity".
HypothesisStatus sum_diverges(const ScheduleSpec& s) {
  switch (s.kind) {
    case ScheduleKind::kConstant:
    case ScheduleKind::kLinear:
    case ScheduleKind::kLog:
    case ScheduleKind::kLogLog:
      return HypothesisStatus::kSatisfied;
    case ScheduleKind::kPower:
      return (s.c2 == 0.0 || s.alpha <= 1.0) ? HypothesisStatus::kSatisfied
                                             : HypothesisStatus::kViolated;
    case ScheduleKind::kCumulativeRho:
      // Bounded denominator when the integrated schedule is summable.
      if (sum_diverges(*s.companion) == HypothesisStatus::kViolated) {
        return HypothesisStatus::kSatisfied;
      }
      return HypothesisStatus::kUndetermined;
  }
  return HypothesisStatus::kUndetermined;
}

}  // namespace

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kLinear: return "linear";
    case ScheduleKind::kPower: return "power";
    case ScheduleKind::kLog: return "log";
    case ScheduleKind::kLogLog: return "loglog";
    case ScheduleKind::kCumulativeRho: return "cumulative_rho";
  }
  return "unknown";
}

std::optional<ScheduleKind> schedule_kind_from_string(std::string_view name) {
  for (auto k : {ScheduleKind::kConstant, ScheduleKind::kLinear, ScheduleKind::kPower,
                 ScheduleKind::kLog, ScheduleKind::kLogLog, ScheduleKind::kCumulativeRho}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(HypothesisStatus status) {
  switch (status) {
    case HypothesisStatus::kSatisfied: return "satisfied";
    case HypothesisStatus::kViolated: return "violated";
    case HypothesisStatus::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

ScheduleSpec ScheduleSpec::constant(double c1) {
  return ScheduleSpec{ScheduleKind::kConstant, c1, 0.0, 1.0, nullptr};
}
ScheduleSpec ScheduleSpec::linear(double c1, double c2) {
  return ScheduleSpec{ScheduleKind::kLinear, c1, c2, 1.0, nullptr};
}
ScheduleSpec ScheduleSpec::power(double c1, double c2, double alpha) {
  return ScheduleSpec{ScheduleKind::kPower, c1, c2, alpha, nullptr};
}
ScheduleSpec ScheduleSpec::log(double c1, double c2) {
  return ScheduleSpec{ScheduleKind::kLog, c1, c2, 1.0, nullptr};
}
ScheduleSpec ScheduleSpec::loglog(double c1, double c2) {
  return ScheduleSpec{ScheduleKind::kLogLog, c1, c2, 1.0, nullptr};
}
ScheduleSpec ScheduleSpec::cumulative_rho(double c1, double c2, ScheduleSpec rho) {
  return ScheduleSpec{ScheduleKind::kCumulativeRho, c1, c2, 1.0,
                      std::make_shared<const ScheduleSpec>(std::move(rho))};
}

void ScheduleSpec::validate() const {
  if (!std::isfinite(c1) || !(c1 > 0.0)) throw ScheduleError("c1 must be finite and > 0");
  if (!std::isfinite(c2) || !(c2 >= 0.0)) throw ScheduleError("c2 must be finite and >= 0");
  if (kind == ScheduleKind::kPower && (!std::isfinite(alpha) || !(alpha > 0.0))) {
    throw ScheduleError("alpha must be finite and > 0");
  }
  if (kind == ScheduleKind::kCumulativeRho) {
    if (!companion) throw ScheduleError("cumulative_rho needs a companion schedule");
    // At t = 0 the sum is empty, so the value is c1 / c2.
    if (!(c2 > 0.0)) throw ScheduleError("cumulative_rho needs c2 > 0");
    companion->validate();
  } else if (companion) {
    throw ScheduleError("only cumulative_rho takes a companion schedule");
  }
}

bool operator==(const ScheduleSpec& lhs, const ScheduleSpec& rhs) {
  if (lhs.kind != rhs.kind || lhs.c1 != rhs.c1 || lhs.c2 != rhs.c2) return false;
  if (lhs.kind == ScheduleKind::kPower && lhs.alpha != rhs.alpha) return false;
  if (static_cast<bool>(lhs.companion) != static_cast<bool>(rhs.companion)) return false;
  return !lhs.companion || *lhs.companion == *rhs.companion;
}

double eval(const ScheduleSpec& spec, std::uint64_t t) {
  spec.validate();
  if (spec.kind != ScheduleKind::kCumulativeRho) {
    return checked(closed_form(spec, static_cast<double>(t)), t);
  }
  const std::vector<double> rho = tabulate(*spec.companion, static_cast<std::size_t>(t));
  double sum = 0.0;
  for (double r : rho) sum += r;
  return checked(spec.c1 / (spec.c2 + sum), t);
}

std::vector<double> tabulate(const ScheduleSpec& spec, std::size_t n) {
  spec.validate();
  std::vector<double> out(n);
  if (spec.kind != ScheduleKind::kCumulativeRho) {
    for (std::size_t t = 0; t < n; ++t) out[t] = checked(closed_form(spec, static_cast<double>(t)), t);
    return out;
  }
  const std::vector<double> rho = n > 0 ? tabulate(*spec.companion, n - 1) : std::vector<double>{};
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = checked(spec.c1 / (spec.c2 + sum), t);
    if (t < rho.size()) sum += rho[t];
  }
  return out;
}

Schedule::Schedule(ScheduleSpec spec, std::size_t precompute)
    : spec_(std::move(spec)),
      table_(std::make_shared<const std::vector<double>>(tabulate(spec_, precompute))) {}

HypothesisStatus classify_rho(const ScheduleSpec& rho) {
  rho.validate();
  switch (rho.kind) {
    case ScheduleKind::kConstant:
      return HypothesisStatus::kViolated;
    case ScheduleKind::kLinear:
      return rho.c2 > 0.0 ? HypothesisStatus::kSatisfied : HypothesisStatus::kViolated;
    case ScheduleKind::kPower:
      return (rho.c2 > 0.0 && rho.alpha > 0.5 && rho.alpha <= 1.0)
                 ? HypothesisStatus::kSatisfied
                 : HypothesisStatus::kViolated;
    case ScheduleKind::kLog:
    case ScheduleKind::kLogLog:
      // Slower than t^{-1/2}: squares are not summable.
      return HypothesisStatus::kViolated;
    case ScheduleKind::kCumulativeRho:
      if (sum_diverges(*rho.companion) == HypothesisStatus::kViolated) {
        return HypothesisStatus::kViolated;
      }
      return HypothesisStatus::kUndetermined;
  }
  return HypothesisStatus::kUndetermined;
}

HypothesisStatus classify_gamma(const ScheduleSpec& gamma) {
  gamma.validate();
  switch (gamma.kind) {
    case ScheduleKind::kConstant:
      return HypothesisStatus::kViolated;
    case ScheduleKind::kLinear:
    case ScheduleKind::kPower:
    case ScheduleKind::kLog:
    case ScheduleKind::kLogLog:
      return gamma.c2 > 0.0 ? HypothesisStatus::kSatisfied : HypothesisStatus::kViolated;
    case ScheduleKind::kCumulativeRho:
      // Decreasing by construction; tends to 0 iff the integrated sum diverges.
      return sum_diverges(*gamma.companion);
  }
  return HypothesisStatus::kUndetermined;
}

HypothesisReport certify(const ScheduleSpec& rho, const ScheduleSpec& gamma,
                         std::uint64_t horizon) {
  if (horizon < 2) throw InvalidArgument("certify needs horizon >= 2");
  const auto n = static_cast<std::size_t>(horizon);
  const std::vector<double> r = tabulate(rho, n);
  const std::vector<double> g = tabulate(gamma, n + 1);

  HypothesisReport rep;
  rep.horizon = horizon;
  rep.gamma_decreasing = true;
  rep.c_rho_gamma_inf = std::numeric_limits<double>::infinity();

  std::uint64_t last_violation = 0;
  bool any_violation = false;
  double prefix = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double drop = g[t] - g[t + 1];
    if (drop < 0.0) rep.gamma_decreasing = false;
    const double ratio = drop / (r[t] * g[t] * g[t]);
    if (ratio < rep.c_rho_gamma_inf) {
      rep.c_rho_gamma_inf = ratio;
      rep.c_rho_gamma_argmin = t;
    }
    if (r[t] * g[t] > 1.0) {
      any_violation = true;
      last_violation = t;
    }
    rep.sum_rho += r[t];
    rep.sum_rho_sq += r[t] * r[t];
    rep.sum_rho_gamma += r[t] * g[t];
    rep.cv_pi_partial_sum += r[t] * prefix * prefix * g[t] * g[t];
    prefix += r[t];
  }
  if (!rep.gamma_decreasing) {
    rep.c_rho_gamma_inf = 0.0;
    rep.c_rho_gamma_argmin = 0;
  }
  rep.t0 = any_violation ? last_violation + 1 : 0;
  rep.t0_found = rep.t0 < horizon;
  rep.rho_hypothesis = classify_rho(rho);
  rep.gamma_hypothesis = classify_gamma(gamma);
  return rep;
}

}  // namespace banditlab
