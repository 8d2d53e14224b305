#include "swucrl/evi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "swucrl/errors.hpp"
#include "swucrl/sliding_window.hpp"

namespace swucrl {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("confidence delta must lie in (0,1)");
}

double floor_count(std::uint64_t count) {
  return static_cast<double>(std::max<std::uint64_t>(1, count));
}

}  // namespace

double reward_radius(std::uint64_t count, std::size_t t_k, std::size_t num_states,
                     std::size_t num_actions, double delta) {
  check_delta(delta);
  const double sat = static_cast<double>(num_states) * static_cast<double>(num_actions) *
                     static_cast<double>(t_k);
  return std::sqrt(7.0 * std::log(2.0 * sat / delta) / (2.0 * floor_count(count)));
}

double transition_radius(std::uint64_t count, std::size_t t_k, std::size_t num_states,
                         std::size_t num_actions, double delta) {
  check_delta(delta);
  const double at = static_cast<double>(num_actions) * static_cast<double>(t_k);
  return std::sqrt(14.0 * static_cast<double>(num_states) * std::log(2.0 * at / delta) /
                   floor_count(count));
}

std::vector<std::size_t> value_order(std::span<const double> u) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return u[x] > u[y]; });
  return order;
}

void inner_max_transition(std::span<const double> p_hat, double radius,
                          std::span<const std::size_t> order, std::span<double> out) {
  std::copy(p_hat.begin(), p_hat.end(), out.begin());
  if (order.empty()) return;
  const std::size_t best = order.front();
  out[best] = std::min(1.0, p_hat[best] + 0.5 * radius);

  double total = 0.0;
  for (double q : out) total += q;
  for (std::size_t j = order.size() - 1; j > 0 && total > 1.0; --j) {
    const std::size_t worst = order[j];
    const double removed = std::min(out[worst], total - 1.0);
    out[worst] -= removed;
    total -= removed;
  }
}

std::vector<double> inner_max_transition(std::span<const double> p_hat, double radius,
                                         std::span<const double> u) {
  const auto order = value_order(u);
  std::vector<double> q(p_hat.size());
  inner_max_transition(p_hat, radius, order, q);
  return q;
}

ConfidenceModel ConfidenceModel::from_stats(const EpisodeStats& stats, double delta) {
  const std::size_t S = stats.num_states();
  const std::size_t A = stats.num_actions();
  ConfidenceModel cm;
  cm.num_states = S;
  cm.num_actions = A;
  cm.r_hat.resize(S * A);
  cm.p_hat.resize(S * A * S);
  cm.reward_radius.resize(S * A);
  cm.transition_radius.resize(S * A);
  const double uniform = 1.0 / static_cast<double>(S);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::size_t sa = s * A + a;
      const auto n = stats.count(s, a);
      cm.r_hat[sa] = stats.reward_estimate(s, a);
      cm.reward_radius[sa] = swucrl::reward_radius(n, stats.start(), S, A, delta);
      cm.transition_radius[sa] = swucrl::transition_radius(n, stats.start(), S, A, delta);
      const auto row = stats.transition_estimate(s, a);
      for (std::size_t next = 0; next < S; ++next) {
        cm.p_hat[sa * S + next] = n == 0 ? uniform : row[next];
      }
    }
  }
  return cm;
}

EviResult extended_value_iteration(const ConfidenceModel& cm, double accuracy,
                                   const EviOptions& opts) {
  if (!(accuracy > 0.0)) throw InputError("extended_value_iteration: accuracy must be positive");
  const std::size_t S = cm.num_states;
  const std::size_t A = cm.num_actions;
  if (S == 0 || A == 0 || cm.r_hat.size() != S * A || cm.p_hat.size() != S * A * S ||
      cm.reward_radius.size() != S * A || cm.transition_radius.size() != S * A) {
    throw InputError("extended_value_iteration: malformed confidence model");
  }

  std::vector<double> reward(S * A);
  for (std::size_t sa = 0; sa < S * A; ++sa) {
    reward[sa] = std::min(1.0, cm.r_hat[sa] + cm.reward_radius[sa]);
  }

  std::vector<double> u(S, 0.0);
  std::vector<double> next(S);
  std::vector<double> q(S);
  std::vector<std::size_t> policy(S, 0);
  std::vector<std::size_t> order(S);
  double span = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return u[x] > u[y]; });

    for (std::size_t s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t sa = s * A + a;
        inner_max_transition(std::span<const double>(cm.p_hat.data() + sa * S, S),
                             cm.transition_radius[sa], order, q);
        double value = reward[sa];
        for (std::size_t n = 0; n < S; ++n) value += q[n] * u[n];
        if (value > best) {
          best = value;
          policy[s] = a;
        }
      }
      next[s] = best;
    }

    double dlo = std::numeric_limits<double>::infinity();
    double dhi = -dlo;
    for (std::size_t s = 0; s < S; ++s) {
      const double d = next[s] - u[s];
      dlo = std::min(dlo, d);
      dhi = std::max(dhi, d);
    }
    span = dhi - dlo;

    const double lo = *std::min_element(next.begin(), next.end());
    for (std::size_t s = 0; s < S; ++s) u[s] = next[s] - lo;

    if (span < accuracy) {
      EviResult res;
      res.policy = std::move(policy);
      res.optimistic_gain = 0.5 * (dlo + dhi);
      res.value = std::move(u);
      res.iterations = it;
      res.final_span = span;
      return res;
    }
  }
  throw NumericError("extended_value_iteration: no convergence after " +
                         std::to_string(opts.max_iterations) + " sweeps (span " +
                         std::to_string(span) + ")",
                     span);
}

}  // namespace swucrl
