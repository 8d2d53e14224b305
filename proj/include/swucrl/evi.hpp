#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swucrl {

class EpisodeStats;

/// sqrt(7 log(2 S A t_k / delta) / (2 max{1, N})). Throws InputError unless 0 < delta < 1.
double reward_radius(std::uint64_t count, std::size_t t_k, std::size_t num_states,
                     std::size_t num_actions, double delta);

/// L1 radius sqrt(14 S log(2 A t_k / delta) / max{1, N}).
double transition_radius(std::uint64_t count, std::size_t t_k, std::size_t num_states,
                         std::size_t num_actions, double delta);

/// States ordered by value, best first; ties keep the lower index first.
std::vector<std::size_t> value_order(std::span<const double> u);

/// Maximizer of q.u over {q a distribution : |q - p_hat|_1 <= radius}.
/// Raises the best state's mass by radius/2 (capped at 1) and drains the
/// excess from the worst states first. `order` must be value_order(u).
void inner_max_transition(std::span<const double> p_hat, double radius,
                          std::span<const std::size_t> order, std::span<double> out);

std::vector<double> inner_max_transition(std::span<const double> p_hat, double radius,
                                         std::span<const double> u);

/// Plausible-MDP set: every (s,a) has a reward interval around r_hat and an
/// L1 transition ball around p_hat.
struct ConfidenceModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> r_hat;              // [s*A + a]
  std::vector<double> p_hat;              // [(s*A + a)*S + s']
  std::vector<double> reward_radius;      // [s*A + a]
  std::vector<double> transition_radius;  // [s*A + a]

  /// Radii from the counts in stats at time t_k = stats.start(). Rows with
  /// N = 0 get the uniform distribution as ball center.
  static ConfidenceModel from_stats(const EpisodeStats& stats, double delta);
};

struct EviResult {
  std::vector<std::size_t> policy;
  double optimistic_gain = 0.0;
  std::vector<double> value;
  std::size_t iterations = 0;
  double final_span = 0.0;
};

struct EviOptions {
  std::size_t max_iterations = 1'000'000;
};

/// Value iteration jointly over actions and the plausible set, with
/// optimistic reward min(1, r_hat + radius). Stops when
/// span(u_{i+1} - u_i) < accuracy and reports the midpoint of that interval
/// as the optimistic gain. Throws NumericError on cap exhaustion.
EviResult extended_value_iteration(const ConfidenceModel& cm, double accuracy,
                                   const EviOptions& opts = {});

}  // namespace swucrl
