#include "banditlab/rewards.hpp"

#include <cmath>
#include <vector>

#include "banditlab/errors.hpp"

namespace banditlab {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

// splitmix64 finalizer.
std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(seeded_engine(master_seed, stream_id)) {}

double RngStream::uniform() noexcept {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::student_t(double nu) {
  if (chi_squared_.n() != nu) {
    chi_squared_.param(std::chi_squared_distribution<double>::param_type(nu));
    chi_squared_.reset();
  }
  const double z = normal_(engine_);
  const double v = chi_squared_(engine_);
  return z / std::sqrt(v / nu);
}

std::uint64_t derive_stream_id(std::uint64_t run, std::uint64_t agent, StreamPurpose purpose) {
  const std::uint64_t p = static_cast<std::uint64_t>(purpose);
  const std::uint64_t a = purpose == StreamPurpose::kQStar ? 0 : agent;
  return mix(mix(mix(p) ^ run) ^ a);
}

std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view to_string(RewardKind kind) {
  return kind == RewardKind::kGaussian ? "gaussian" : "student_t";
}

double RewardModel::noise_scale() const {
  if (kind == RewardKind::kGaussian) return sigma;
  if (unit_variance_rescale && nu > 2.0) return std::sqrt((nu - 2.0) / nu);
  return 1.0;
}

bool RewardModel::has_finite_second_moment() const noexcept {
  return kind == RewardKind::kGaussian || nu > 2.0;
}

void RewardModel::validate() const {
  if (kind == RewardKind::kGaussian && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw InvalidArgument("gaussian sigma must be finite and > 0");
  }
  if (kind == RewardKind::kStudentT && !(nu > 1.0 && std::isfinite(nu))) {
    throw InvalidArgument("student_t nu must be finite and > 1");
  }
}

ArmStats make_q_star(RngStream& rng, std::size_t k, double mean, double std) {
  if (k < 2) throw InvalidArgument("make_q_star needs k >= 2");
  if (!(std >= 0.0)) throw InvalidArgument("make_q_star needs std >= 0");
  std::vector<double> q(k);
  for (double& v : q) v = mean + std * rng.normal();
  return ArmStats(std::move(q));
}

double draw_noise(const RewardModel& model, RngStream& rng) {
  const double scale = model.noise_scale();
  if (model.kind == RewardKind::kGaussian) return scale * rng.normal();
  return scale * rng.student_t(model.nu);
}

double draw_reward(const RewardModel& model, std::size_t arm, RngStream& rng) {
  if (arm >= model.stats.size()) throw InvalidArgument("arm out of range");
  return model.stats[arm] + draw_noise(model, rng);
}

}  // namespace banditlab
