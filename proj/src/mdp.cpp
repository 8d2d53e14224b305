#include "swucrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swucrl/errors.hpp"

namespace swucrl {

MdpConfig::MdpConfig(std::size_t num_states, std::size_t num_actions,
                     std::vector<double> mean_reward, std::vector<double> transition)
    : num_states_(num_states),
      num_actions_(num_actions),
      mean_reward_(std::move(mean_reward)),
      transition_(std::move(transition)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw InputError("MdpConfig: S and A must be positive");
  }
  if (mean_reward_.size() != num_states_ * num_actions_) {
    throw InputError("MdpConfig: reward table must have S*A entries");
  }
  if (transition_.size() != num_states_ * num_actions_ * num_states_) {
    throw InputError("MdpConfig: transition table must have S*A*S entries");
  }
  for (double r : mean_reward_) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("MdpConfig: mean reward outside [0,1]");
  }
  for (std::size_t sa = 0; sa < num_states_ * num_actions_; ++sa) {
    double sum = 0.0;
    for (std::size_t n = 0; n < num_states_; ++n) {
      const double p = transition_[sa * num_states_ + n];
      if (!(p >= 0.0 && p <= 1.0)) throw InputError("MdpConfig: transition entry outside [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw InputError("MdpConfig: transition row " + std::to_string(sa) +
                       " sums to " + std::to_string(sum));
    }
  }
}

MdpConfig MdpConfig::relabeled(std::span<const std::size_t> perm) const {
  if (perm.size() != num_states_) throw InputError("relabeled: permutation size mismatch");
  std::vector<double> r(mean_reward_.size());
  std::vector<double> p(transition_.size());
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      r[perm[s] * num_actions_ + a] = mean_reward(s, a);
      const auto row = transition(s, a);
      for (std::size_t n = 0; n < num_states_; ++n) {
        p[(perm[s] * num_actions_ + a) * num_states_ + perm[n]] = row[n];
      }
    }
  }
  return MdpConfig(num_states_, num_actions_, std::move(r), std::move(p));
}

SwitchingMdp::SwitchingMdp(std::vector<MdpConfig> configs, std::vector<std::size_t> change_points,
                           std::size_t horizon)
    : configs_(std::move(configs)), change_points_(std::move(change_points)), horizon_(horizon) {
  if (configs_.empty()) throw InputError("SwitchingMdp: at least one config required");
  if (configs_.size() != change_points_.size() + 1) {
    throw InputError("SwitchingMdp: need exactly one more config than change points");
  }
  if (horizon_ == 0) throw InputError("SwitchingMdp: horizon must be positive");
  for (const auto& c : configs_) {
    if (c.num_states() != num_states() || c.num_actions() != num_actions()) {
      throw InputError("SwitchingMdp: configs disagree on S or A");
    }
  }
  std::size_t prev = 1;
  for (std::size_t c : change_points_) {
    if (c <= prev) throw InputError("SwitchingMdp: change points must satisfy 1 < c_1 < c_2 < ...");
    prev = c;
  }
  if (!change_points_.empty() && change_points_.back() > horizon_ - 1) {
    throw InputError("SwitchingMdp: last change point must be <= T - 1");
  }
}

std::size_t SwitchingMdp::active_config(std::size_t t) const {
  if (t < 1 || t > horizon_) {
    throw InputError("active_config: t=" + std::to_string(t) + " outside [1, " +
                     std::to_string(horizon_) + "]");
  }
  return static_cast<std::size_t>(
      std::upper_bound(change_points_.begin(), change_points_.end(), t) - change_points_.begin());
}

StepOutcome step(const SwitchingMdp& m, EnvState& env, std::size_t action) {
  if (env.t > m.horizon()) throw SequencingError("step: horizon exhausted");
  if (action >= m.num_actions()) {
    throw InputError("step: action " + std::to_string(action) + " out of range");
  }
  const MdpConfig& c = m.configs()[m.active_config(env.t)];
  const double reward = env.rng.bernoulli(c.mean_reward(env.state, action)) ? 1.0 : 0.0;
  const std::size_t next = env.rng.categorical(c.transition(env.state, action));
  env.state = next;
  ++env.t;
  return {reward, next};
}

MdpConfig random_mdp_config(std::size_t num_states, std::size_t num_actions, Rng& rng) {
  std::vector<double> r(num_states * num_actions);
  std::vector<double> p(num_states * num_actions * num_states);
  for (auto& x : r) x = rng.uniform();
  for (std::size_t sa = 0; sa < num_states * num_actions; ++sa) {
    double* row = p.data() + sa * num_states;
    double sum = 0.0;
    for (std::size_t n = 0; n < num_states; ++n) {
      row[n] = rng.exponential();
      sum += row[n];
    }
    for (std::size_t n = 0; n < num_states; ++n) row[n] /= sum;
  }
  return MdpConfig(num_states, num_actions, std::move(r), std::move(p));
}

std::vector<std::size_t> regular_change_points(std::size_t num_changes, std::size_t horizon) {
  if (num_changes == 0) return {};
  if (horizon < num_changes + 2) {
    throw InputError("regular_change_points: need T >= l + 2 to place l changes in (1, T-1]");
  }
  const std::size_t period = (horizon + num_changes - 1) / num_changes;
  std::vector<std::size_t> cps(num_changes);
  for (std::size_t i = 1; i <= num_changes; ++i) {
    // Keeps room for the remaining l - i changes below T.
    const std::size_t latest = horizon - 1 - (num_changes - i);
    cps[i - 1] = std::min(i * period, latest);
  }
  return cps;
}

SwitchingMdp random_switching_mdp(std::size_t num_states, std::size_t num_actions,
                                  std::size_t num_changes, std::size_t horizon,
                                  std::uint64_t seed) {
  if (num_states < 2) throw InputError("random_switching_mdp: S must be >= 2");
  if (num_actions < 1) throw InputError("random_switching_mdp: A must be >= 1");
  auto cps = regular_change_points(num_changes, horizon);
  Rng rng(seed);
  std::vector<MdpConfig> configs;
  configs.reserve(num_changes + 1);
  for (std::size_t i = 0; i <= num_changes; ++i) {
    configs.push_back(random_mdp_config(num_states, num_actions, rng));
  }
  return SwitchingMdp(std::move(configs), std::move(cps), horizon);
}

}  // namespace swucrl
