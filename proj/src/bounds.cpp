#include "swucrl/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace swucrl::bounds {

namespace {

// sqrt(A log(T/delta))
double log_factor(double horizon, std::size_t num_actions, double delta) {
  return std::sqrt(static_cast<double>(num_actions) * std::log(horizon / delta));
}

}  // namespace

double optimal_window(double horizon, std::size_t num_changes, double diameter,
                      std::size_t num_states, std::size_t num_actions, double delta) {
  if (num_changes == 0) return horizon;
  const double d = std::max(diameter, 1.0);
  const double inner = 16.53 / static_cast<double>(num_changes) * horizon * d *
                       static_cast<double>(num_states) *
                       log_factor(horizon, num_actions, delta);
  return std::pow(inner, 2.0 / 3.0);
}

std::size_t optimal_window_steps(double horizon, std::size_t num_changes, double diameter,
                                 std::size_t num_states, std::size_t num_actions, double delta) {
  const double w = optimal_window(horizon, num_changes, diameter, num_states, num_actions, delta);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w)));
}

double theorem1_bound(double horizon, double window, std::size_t num_changes, double diameter,
                      std::size_t num_states, std::size_t num_actions, double delta) {
  const double batches = std::ceil(horizon / std::sqrt(window));
  return 2.0 * static_cast<double>(num_changes) * window +
         66.12 * batches * diameter * static_cast<double>(num_states) *
             log_factor(horizon, num_actions, delta);
}

double corollary1_bound(double horizon, std::size_t num_changes, double diameter,
                        std::size_t num_states, std::size_t num_actions, double delta) {
  const double third = 1.0 / 3.0;
  const double two_thirds = 2.0 / 3.0;
  return 38.94 * std::pow(static_cast<double>(num_changes), third) *
         std::pow(horizon, two_thirds) * std::pow(diameter, two_thirds) *
         std::pow(static_cast<double>(num_states), two_thirds) *
         std::pow(static_cast<double>(num_actions) * std::log(horizon / delta), third);
}

double corollary2_sample_complexity(double eps, std::size_t num_changes, double diameter,
                                    std::size_t num_states, std::size_t num_actions,
                                    double delta) {
  const double c3 = 38.94 * 38.94 * 38.94;
  const double s = static_cast<double>(num_states);
  const double alpha = c3 * static_cast<double>(num_changes) * diameter * diameter * s * s *
                       static_cast<double>(num_actions) / (eps * eps * eps);
  return 2.0 * alpha * std::log(alpha / delta);
}

WindowCheck validate_window(double window, double horizon, std::size_t num_states,
                            std::size_t num_actions, double delta) {
  WindowCheck check;
  const double sa = static_cast<double>(num_states) * static_cast<double>(num_actions);
  if (window < sa) check.violated_terms.emplace_back("SA");
  const double lg = std::log2(8.0 * window / sa);
  const double log_term = static_cast<double>(num_actions) * lg * lg / std::log(horizon / delta);
  if (window < log_term) check.violated_terms.emplace_back("log");
  check.admissible = check.violated_terms.empty();
  return check;
}

double episode_count_bound(double horizon, double window, std::size_t num_states,
                           std::size_t num_actions) {
  const double sa = static_cast<double>(num_states) * static_cast<double>(num_actions);
  return std::ceil(horizon / window) * sa * std::log2(8.0 * window / sa);
}

double weighted_visit_bound(double horizon, double window, std::size_t num_states,
                            std::size_t num_actions) {
  const double sa = static_cast<double>(num_states) * static_cast<double>(num_actions);
  return (2.0 * std::sqrt(2.0) + 2.0) * std::ceil(horizon / window) * std::sqrt(sa * window);
}

}  // namespace swucrl::bounds
