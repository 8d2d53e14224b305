#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

namespace swucrl {

struct Transition {
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;
};

/// The last `capacity` transitions together with per-(s,a) tallies kept in
/// step with the retained entries. A capacity of kUnbounded never evicts,
/// which turns the buffer into the full since-restart history used by UCRL2.
class SlidingWindowBuffer {
 public:
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  SlidingWindowBuffer(std::size_t num_states, std::size_t num_actions, std::size_t capacity);

  /// Appends rec and evicts at most one oldest record.
  void push(const Transition& rec);
  void clear();

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  const std::deque<Transition>& entries() const noexcept { return entries_; }

  std::uint64_t count(std::size_t s, std::size_t a) const { return count_[s * num_actions_ + a]; }
  double reward_sum(std::size_t s, std::size_t a) const {
    return reward_sum_[s * num_actions_ + a];
  }
  std::uint64_t successor_count(std::size_t s, std::size_t a, std::size_t next) const {
    return successor_[(s * num_actions_ + a) * num_states_ + next];
  }

  const std::vector<std::uint64_t>& counts() const noexcept { return count_; }
  const std::vector<double>& reward_sums() const noexcept { return reward_sum_; }
  const std::vector<std::uint64_t>& successor_counts() const noexcept { return successor_; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t capacity_;
  std::deque<Transition> entries_;
  std::vector<std::uint64_t> count_;
  std::vector<double> reward_sum_;
  std::vector<std::uint64_t> successor_;
};

/// Statistics frozen at the start of episode k plus the in-episode visit
/// counts v_k. Tables use the same row-major layout as MdpConfig.
class EpisodeStats {
 public:
  EpisodeStats(std::size_t num_states, std::size_t num_actions, std::size_t start);

  std::size_t start() const noexcept { return start_; }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  std::uint64_t count(std::size_t s, std::size_t a) const { return count_[idx(s, a)]; }
  double reward_sum(std::size_t s, std::size_t a) const { return reward_sum_[idx(s, a)]; }
  std::uint64_t successor_count(std::size_t s, std::size_t a, std::size_t next) const {
    return successor_[idx(s, a) * num_states_ + next];
  }
  std::uint64_t visits(std::size_t s, std::size_t a) const { return visits_[idx(s, a)]; }

  double reward_estimate(std::size_t s, std::size_t a) const { return r_hat_[idx(s, a)]; }
  std::span<const double> transition_estimate(std::size_t s, std::size_t a) const {
    return {p_hat_.data() + idx(s, a) * num_states_, num_states_};
  }

  void record_visit(std::size_t s, std::size_t a) { ++visits_[idx(s, a)]; }

  /// sum_{s,a} v_k(s,a) / sqrt(max{1, N_k(s,a)})
  double weighted_visits() const;

 private:
  friend EpisodeStats snapshot_episode(const SlidingWindowBuffer& buf, std::size_t start);

  std::size_t idx(std::size_t s, std::size_t a) const { return s * num_actions_ + a; }

  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t start_;
  std::vector<std::uint64_t> count_;
  std::vector<double> reward_sum_;
  std::vector<std::uint64_t> successor_;
  std::vector<std::uint64_t> visits_;
  std::vector<double> r_hat_;
  std::vector<double> p_hat_;
};

/// Copies the buffer tallies into N_k, R_k, P_k and forms the estimates
/// R_k / max{1, N_k}, P_k / max{1, N_k}. v_k starts at zero.
EpisodeStats snapshot_episode(const SlidingWindowBuffer& buf, std::size_t start);

/// True iff v_k(s,a) >= max{1, N_k(s,a)}. Checked before executing (s,a).
bool episode_should_end(const EpisodeStats& stats, std::size_t s, std::size_t a);

}  // namespace swucrl
