#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <json.hpp>

namespace swucrl {

struct StepRecord {
  std::size_t t;
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t episode;  // 1-based episode index k
};

struct EpisodeRecord {
  std::size_t start;  // t_k
  std::size_t length = 0;
  double optimistic_gain = 0.0;
  std::size_t evi_iterations = 0;
  /// sum_{s,a} v_k(s,a) / sqrt(max{1, N_k(s,a)}), filled in when the episode closes.
  double weighted_visits = 0.0;
};

/// One agent run: exactly T step records with t = 1..T.
struct RunTrace {
  std::vector<StepRecord> steps;
  std::vector<EpisodeRecord> episodes;

  std::size_t num_episodes() const noexcept { return episodes.size(); }
  std::vector<double> rewards() const;
  std::size_t max_episode_length() const;
};

/// CSV with header `t,state,action,reward,episode`, one row per step.
void write_trace_csv(const RunTrace& trace, std::ostream& os);
RunTrace read_trace_csv(std::istream& is);

/// Per-episode sidecar: {"num_episodes": m, "episodes": [{"t_k", "length",
/// "optimistic_gain", "evi_iterations", "weighted_visits"}]}.
nlohmann::json episode_metadata_json(const RunTrace& trace);

}  // namespace swucrl
