#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swucrl/rng.hpp"

namespace swucrl {

/// One stationary MDP: mean rewards r(s,a) in [0,1] and transition rows
/// p(.|s,a). States and actions are 0-based. Storage is row-major:
/// reward index s*A + a, transition index (s*A + a)*S + s'.
class MdpConfig {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Throws InputError if any table has the wrong size, a reward leaves
  /// [0,1], or a transition row is not a probability vector.
  MdpConfig(std::size_t num_states, std::size_t num_actions, std::vector<double> mean_reward,
            std::vector<double> transition);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  double mean_reward(std::size_t s, std::size_t a) const {
    return mean_reward_[s * num_actions_ + a];
  }
  std::span<const double> transition(std::size_t s, std::size_t a) const {
    return {transition_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }

  const std::vector<double>& mean_rewards() const noexcept { return mean_reward_; }
  const std::vector<double>& transitions() const noexcept { return transition_; }

  /// Same MDP with states renamed: new state perm[s] plays the role of old state s.
  MdpConfig relabeled(std::span<const std::size_t> perm) const;

  bool operator==(const MdpConfig&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> mean_reward_;
  std::vector<double> transition_;
};

/// Piecewise-stationary environment: config i is active on steps
/// [c_i, c_{i+1}) with c_0 = 1. Steps are 1-based.
class SwitchingMdp {
 public:
  /// Requires configs.size() == change_points.size() + 1, identical S and A
  /// across configs, and 1 < c_1 < ... < c_l <= horizon - 1.
  SwitchingMdp(std::vector<MdpConfig> configs, std::vector<std::size_t> change_points,
               std::size_t horizon);

  std::size_t num_states() const noexcept { return configs_.front().num_states(); }
  std::size_t num_actions() const noexcept { return configs_.front().num_actions(); }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t num_changes() const noexcept { return change_points_.size(); }

  const std::vector<MdpConfig>& configs() const noexcept { return configs_; }
  const std::vector<std::size_t>& change_points() const noexcept { return change_points_; }

  /// Largest i with c_i <= t. Throws InputError unless 1 <= t <= horizon.
  std::size_t active_config(std::size_t t) const;

  bool operator==(const SwitchingMdp&) const = default;

 private:
  std::vector<MdpConfig> configs_;
  std::vector<std::size_t> change_points_;
  std::size_t horizon_;
};

struct EnvState {
  explicit EnvState(std::uint64_t seed, std::size_t initial_state = 0)
      : state(initial_state), rng(seed) {}

  std::size_t t = 1;
  std::size_t state;
  Rng rng;
};

struct StepOutcome {
  double reward;
  std::size_t next_state;
};

/// Draws a Bernoulli reward and the next state from the config active at env.t,
/// then advances env. Throws InputError on a bad action and SequencingError
/// once env.t exceeds the horizon.
StepOutcome step(const SwitchingMdp& m, EnvState& env, std::size_t action);

/// Mean rewards uniform on [0,1], transition rows flat-Dirichlet.
MdpConfig random_mdp_config(std::size_t num_states, std::size_t num_actions, Rng& rng);

/// l changes at c_i = i * ceil(T / l), the last one clamped to T - 1.
std::vector<std::size_t> regular_change_points(std::size_t num_changes, std::size_t horizon);

SwitchingMdp random_switching_mdp(std::size_t num_states, std::size_t num_actions,
                                  std::size_t num_changes, std::size_t horizon,
                                  std::uint64_t seed);

}  // namespace swucrl
