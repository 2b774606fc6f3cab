#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "banditlab/policy_core.hpp"

namespace banditlab {

// A reproducible random stream identified by (master_seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq from the four
// 32-bit halves of the pair, so equal pairs replay bit-for-bit and distinct
// pairs start from unrelated states. A stream is single-owner.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double normal();
  // T_nu as N(0,1) / sqrt(chi2_nu / nu).
  double student_t(double nu);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::chi_squared_distribution<double> chi_squared_;
};

enum class StreamPurpose : std::uint64_t {
  kQStar = 1,
  kRewardNoise = 2,
  kAction = 3,
};

// Stream id for (run, agent, purpose). `agent` is ignored for kQStar so that
// every agent of a run sees the same q* draw.
std::uint64_t derive_stream_id(std::uint64_t run, std::uint64_t agent, StreamPurpose purpose);

// Stable 64-bit hash of a string (FNV-1a), used to key agent streams by name.
std::uint64_t hash_name(std::string_view name) noexcept;

enum class RewardKind { kGaussian, kStudentT };

std::string_view to_string(RewardKind kind);

// Per-arm reward distributions around q*(a).
//
//   gaussian   q*(a) + sigma N(0,1)
//   student_t  q*(a) + s T_nu,  s = sqrt((nu - 2) / nu) when rescaling and
//              nu > 2, otherwise s = 1
struct RewardModel {
  RewardKind kind = RewardKind::kGaussian;
  ArmStats stats;
  double sigma = 1.0;
  double nu = 2.5;
  bool unit_variance_rescale = true;

  double noise_scale() const;
  // False when the reward variance is infinite (student_t with nu <= 2), i.e.
  // the bounded second moment assumption does not hold.
  bool has_finite_second_moment() const noexcept;
  void validate() const;
};

// Draws k independent N(mean, std^2) arm means.
ArmStats make_q_star(RngStream& rng, std::size_t k, double mean = 4.0, double std = 1.0);

// One zero-mean noise sample scaled per the model.
double draw_noise(const RewardModel& model, RngStream& rng);

double draw_reward(const RewardModel& model, std::size_t arm, RngStream& rng);

}  // namespace banditlab
