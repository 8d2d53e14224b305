#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace swucrl::bounds {

/// ((16.53 / l) T max(D,1) S sqrt(A log(T/delta)))^(2/3); T when l = 0.
double optimal_window(double horizon, std::size_t num_changes, double diameter,
                      std::size_t num_states, std::size_t num_actions, double delta);

/// W* rounded to the nearest integer, at least 1.
std::size_t optimal_window_steps(double horizon, std::size_t num_changes, double diameter,
                                 std::size_t num_states, std::size_t num_actions, double delta);

/// 2 l W + 66.12 ceil(T / sqrt(W)) D S sqrt(A log(T/delta))
double theorem1_bound(double horizon, double window, std::size_t num_changes, double diameter,
                      std::size_t num_states, std::size_t num_actions, double delta);

/// 38.94 l^(1/3) T^(2/3) D^(2/3) S^(2/3) (A log(T/delta))^(1/3)
double corollary1_bound(double horizon, std::size_t num_changes, double diameter,
                        std::size_t num_states, std::size_t num_actions, double delta);

/// 2 alpha log(alpha / delta) with alpha = 38.94^3 l D^2 S^2 A / eps^3.
double corollary2_sample_complexity(double eps, std::size_t num_changes, double diameter,
                                    std::size_t num_states, std::size_t num_actions,
                                    double delta);

struct WindowCheck {
  bool admissible = true;
  /// Names of failed terms: "SA" and/or "log".
  std::vector<std::string> violated_terms;
};

/// W >= SA and W >= A (log2(8W / SA))^2 / log(T/delta), each checked at the given W.
WindowCheck validate_window(double window, double horizon, std::size_t num_states,
                            std::size_t num_actions, double delta);

/// ceil(T/W) S A log2(8W / SA): episode-count bound for W >= SA.
double episode_count_bound(double horizon, double window, std::size_t num_states,
                           std::size_t num_actions);

/// (2 sqrt 2 + 2) ceil(T/W) sqrt(S A W): bound on sum_k sum_{s,a} v_k / sqrt(max{1,N_k}).
double weighted_visit_bound(double horizon, double window, std::size_t num_states,
                            std::size_t num_actions);

}  // namespace swucrl::bounds
