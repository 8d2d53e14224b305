#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swucrl/mdp.hpp"
#include "swucrl/trace.hpp"

namespace swucrl {

struct GainResult {
  double gain = 0.0;
  /// Relative values, normalized so that min_s bias[s] == 0.
  std::vector<double> bias;
  std::vector<std::size_t> policy;
  std::size_t iterations = 0;
};

struct DiameterResult {
  double diameter = 0.0;
  /// hitting_time[s1 * S + s2]: minimal expected steps from s1 to s2; zero on the diagonal.
  std::vector<double> hitting_time;

  double hitting(std::size_t from, std::size_t to, std::size_t num_states) const {
    return hitting_time[from * num_states + to];
  }
};

struct GainOptions {
  double eps = 1e-9;
  std::size_t max_iterations = 1'000'000;
  /// Self-loop probability mixed into every row. Leaves each policy's
  /// stationary distribution (hence the gain) unchanged and breaks periodicity.
  double aperiodicity = 0.01;
};

/// Optimal average reward by relative value iteration on the aperiodic
/// transform. Stops once span(u_{i+1} - u_i) < eps; the gain is the midpoint
/// of that interval. Throws NumericError if the cap is reached.
GainResult optimal_gain(const MdpConfig& c, const GainOptions& opts = {});
GainResult optimal_gain(const MdpConfig& c, double eps);

struct DiameterOptions {
  double tolerance = 1e-9;
  double divergence_cap = 1e9;
  std::size_t max_iterations = 10'000'000;
};

/// Expected-hitting-time value iteration per target state. A 1-state MDP has
/// diameter 0. Throws InfiniteDiameterError when some state cannot reach
/// another under any policy.
DiameterResult diameter(const MdpConfig& c, const DiameterOptions& opts = {});

/// curve[t-1] = sum_{tau <= t} (gains[active(tau)] - rewards[tau-1]).
/// Throws InputError if rewards.size() != m.horizon() or gains.size() != #configs.
std::vector<double> regret_curve(std::span<const double> rewards, const SwitchingMdp& m,
                                 std::span<const double> gains);

/// Regret curve of a recorded run; the trace must cover exactly m.horizon() steps.
std::vector<double> regret_of_trace(const RunTrace& trace, const SwitchingMdp& m,
                                    std::span<const double> gains);

/// Optimal gain of every config of m.
std::vector<double> config_gains(const SwitchingMdp& m, double eps = 1e-9);

}  // namespace swucrl
