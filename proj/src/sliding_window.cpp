#include "swucrl/sliding_window.hpp"

#include <algorithm>
#include <cmath>

#include "swucrl/errors.hpp"

namespace swucrl {

SlidingWindowBuffer::SlidingWindowBuffer(std::size_t num_states, std::size_t num_actions,
                                         std::size_t capacity)
    : num_states_(num_states),
      num_actions_(num_actions),
      capacity_(capacity),
      count_(num_states * num_actions, 0),
      reward_sum_(num_states * num_actions, 0.0),
      successor_(num_states * num_actions * num_states, 0) {
  if (capacity_ == 0) throw InputError("SlidingWindowBuffer: capacity must be positive");
}

void SlidingWindowBuffer::push(const Transition& rec) {
  const std::size_t sa = rec.state * num_actions_ + rec.action;
  entries_.push_back(rec);
  ++count_[sa];
  reward_sum_[sa] += rec.reward;
  ++successor_[sa * num_states_ + rec.next_state];

  if (entries_.size() > capacity_) {
    const Transition& old = entries_.front();
    const std::size_t osa = old.state * num_actions_ + old.action;
    --count_[osa];
    --successor_[osa * num_states_ + old.next_state];
    // Rewards are Bernoulli in practice; resetting at zero count removes drift otherwise.
    reward_sum_[osa] = count_[osa] == 0 ? 0.0 : reward_sum_[osa] - old.reward;
    entries_.pop_front();
  }
}

void SlidingWindowBuffer::clear() {
  entries_.clear();
  std::fill(count_.begin(), count_.end(), 0);
  std::fill(reward_sum_.begin(), reward_sum_.end(), 0.0);
  std::fill(successor_.begin(), successor_.end(), 0);
}

EpisodeStats::EpisodeStats(std::size_t num_states, std::size_t num_actions, std::size_t start)
    : num_states_(num_states),
      num_actions_(num_actions),
      start_(start),
      count_(num_states * num_actions, 0),
      reward_sum_(num_states * num_actions, 0.0),
      successor_(num_states * num_actions * num_states, 0),
      visits_(num_states * num_actions, 0),
      r_hat_(num_states * num_actions, 0.0),
      p_hat_(num_states * num_actions * num_states, 0.0) {}

double EpisodeStats::weighted_visits() const {
  double sum = 0.0;
  for (std::size_t sa = 0; sa < visits_.size(); ++sa) {
    if (visits_[sa] == 0) continue;
    sum += static_cast<double>(visits_[sa]) /
           std::sqrt(static_cast<double>(std::max<std::uint64_t>(1, count_[sa])));
  }
  return sum;
}

EpisodeStats snapshot_episode(const SlidingWindowBuffer& buf, std::size_t start) {
  const std::size_t S = buf.num_states();
  const std::size_t A = buf.num_actions();
  EpisodeStats st(S, A, start);
  st.count_ = buf.counts();
  st.reward_sum_ = buf.reward_sums();
  st.successor_ = buf.successor_counts();
  for (std::size_t sa = 0; sa < S * A; ++sa) {
    const double n = static_cast<double>(std::max<std::uint64_t>(1, st.count_[sa]));
    st.r_hat_[sa] = std::clamp(st.reward_sum_[sa] / n, 0.0, 1.0);
    for (std::size_t next = 0; next < S; ++next) {
      st.p_hat_[sa * S + next] = static_cast<double>(st.successor_[sa * S + next]) / n;
    }
  }
  return st;
}

bool episode_should_end(const EpisodeStats& stats, std::size_t s, std::size_t a) {
  return stats.visits(s, a) >= std::max<std::uint64_t>(1, stats.count(s, a));
}

}  // namespace swucrl
