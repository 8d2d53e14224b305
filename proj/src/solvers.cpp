#include "swucrl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swucrl/errors.hpp"

namespace swucrl {

namespace {

double span_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

GainResult optimal_gain(const MdpConfig& c, const GainOptions& opts) {
  if (!(opts.eps > 0.0)) throw InputError("optimal_gain: eps must be positive");
  if (!(opts.aperiodicity > 0.0 && opts.aperiodicity < 1.0)) {
    throw InputError("optimal_gain: aperiodicity must lie in (0,1)");
  }
  const std::size_t S = c.num_states();
  const std::size_t A = c.num_actions();
  const double keep = 1.0 - opts.aperiodicity;

  std::vector<double> u(S, 0.0);
  std::vector<double> next(S);
  std::vector<double> diff(S);
  std::vector<std::size_t> policy(S, 0);
  double last_span = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = c.transition(s, a);
        double ev = 0.0;
        for (std::size_t n = 0; n < S; ++n) ev += row[n] * u[n];
        const double q = c.mean_reward(s, a) + keep * ev + opts.aperiodicity * u[s];
        if (q > best) {
          best = q;
          policy[s] = a;
        }
      }
      next[s] = best;
      diff[s] = best - u[s];
    }
    last_span = span_of(diff);
    const double lo = *std::min_element(next.begin(), next.end());
    for (std::size_t s = 0; s < S; ++s) u[s] = next[s] - lo;
    if (last_span < opts.eps) {
      const auto [dlo, dhi] = std::minmax_element(diff.begin(), diff.end());
      GainResult res;
      res.gain = std::clamp(0.5 * (*dlo + *dhi), 0.0, 1.0);
      // The transform scales relative values by 1 / keep.
      res.bias.resize(S);
      for (std::size_t s = 0; s < S; ++s) res.bias[s] = keep * u[s];
      res.policy = std::move(policy);
      res.iterations = it;
      return res;
    }
  }
  throw NumericError("optimal_gain: no convergence after " + std::to_string(opts.max_iterations) +
                         " sweeps (span " + std::to_string(last_span) + ")",
                     last_span);
}

GainResult optimal_gain(const MdpConfig& c, double eps) {
  GainOptions opts;
  opts.eps = eps;
  return optimal_gain(c, opts);
}

namespace {

// States that can reach `target` with positive probability under some action.
std::vector<char> can_reach(const MdpConfig& c, std::size_t target) {
  const std::size_t S = c.num_states();
  std::vector<char> reach(S, 0);
  reach[target] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < S; ++s) {
      if (reach[s]) continue;
      for (std::size_t a = 0; a < c.num_actions() && !reach[s]; ++a) {
        const auto row = c.transition(s, a);
        for (std::size_t n = 0; n < S; ++n) {
          if (row[n] > 0.0 && reach[n]) {
            reach[s] = 1;
            changed = true;
            break;
          }
        }
      }
    }
  }
  return reach;
}

}  // namespace

DiameterResult diameter(const MdpConfig& c, const DiameterOptions& opts) {
  const std::size_t S = c.num_states();
  const std::size_t A = c.num_actions();
  DiameterResult res;
  res.hitting_time.assign(S * S, 0.0);

  std::vector<double> h(S);
  for (std::size_t target = 0; target < S; ++target) {
    const auto reach = can_reach(c, target);
    for (std::size_t s = 0; s < S; ++s) {
      if (!reach[s]) {
        throw InfiniteDiameterError("diameter: state " + std::to_string(s) +
                                        " cannot reach state " + std::to_string(target),
                                    std::numeric_limits<double>::infinity());
      }
    }
    // Gauss-Seidel sweeps from h = 0 increase monotonically to the minimal
    // expected hitting times.
    std::fill(h.begin(), h.end(), 0.0);
    bool converged = false;
    double change = 0.0;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      change = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        if (s == target) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < A; ++a) {
          const auto row = c.transition(s, a);
          double ev = 0.0;
          for (std::size_t n = 0; n < S; ++n) {
            if (n != target) ev += row[n] * h[n];
          }
          best = std::min(best, 1.0 + ev);
        }
        change = std::max(change, std::abs(best - h[s]));
        h[s] = best;
        if (h[s] > opts.divergence_cap) {
          throw InfiniteDiameterError(
              "diameter: hitting time to state " + std::to_string(target) + " exceeds cap",
              h[s]);
        }
      }
      if (change < opts.tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericError("diameter: hitting-time iteration did not converge", change);
    }
    for (std::size_t s = 0; s < S; ++s) {
      res.hitting_time[s * S + target] = h[s];
      if (s != target) res.diameter = std::max(res.diameter, h[s]);
    }
  }
  return res;
}

std::vector<double> regret_curve(std::span<const double> rewards, const SwitchingMdp& m,
                                 std::span<const double> gains) {
  if (rewards.size() != m.horizon()) {
    throw InputError("regret_curve: trace has " + std::to_string(rewards.size()) +
                     " steps, horizon is " + std::to_string(m.horizon()));
  }
  if (gains.size() != m.configs().size()) {
    throw InputError("regret_curve: need one gain per config");
  }
  std::vector<double> curve(rewards.size());
  const auto& cps = m.change_points();
  std::size_t active = 0;
  double acc = 0.0;
  for (std::size_t t = 1; t <= rewards.size(); ++t) {
    while (active < cps.size() && cps[active] <= t) ++active;
    acc += gains[active] - rewards[t - 1];
    curve[t - 1] = acc;
  }
  return curve;
}

std::vector<double> regret_of_trace(const RunTrace& trace, const SwitchingMdp& m,
                                    std::span<const double> gains) {
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].t != i + 1) throw InputError("regret_of_trace: steps are not contiguous");
  }
  const auto rewards = trace.rewards();
  return regret_curve(rewards, m, gains);
}

std::vector<double> config_gains(const SwitchingMdp& m, double eps) {
  std::vector<double> gains;
  gains.reserve(m.configs().size());
  for (const auto& c : m.configs()) gains.push_back(optimal_gain(c, eps).gain);
  return gains;
}

}  // namespace swucrl
