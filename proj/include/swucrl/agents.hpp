#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swucrl/mdp.hpp"
#include "swucrl/trace.hpp"

namespace swucrl {

enum class AgentKind { SwUcrl, Ucrl2, Ucrl2R, Ucrl2RW };

std::string_view to_string(AgentKind kind);
/// Accepts "sw-ucrl", "ucrl2", "ucrl2-r", "ucrl2-rw" (case-insensitive,
/// '_' and '-' interchangeable). Throws InputError otherwise.
AgentKind parse_agent_kind(std::string_view name);

struct AgentConfig {
  AgentKind kind = AgentKind::SwUcrl;
  double delta = 0.1;
  /// Sliding-window length for SwUcrl, restart period for Ucrl2RW.
  std::size_t window = 1;
  /// Steps at which Ucrl2R discards its history.
  std::vector<std::size_t> restart_schedule;
  std::size_t horizon = 0;

  /// Throws InputError on delta outside (0,1) or window == 0.
  void validate() const;
};

/// ceil(i^3 / l^2) for i = 1, 2, ... while <= horizon, deduplicated. Empty for l = 0.
std::vector<std::size_t> default_restart_schedule(std::size_t num_changes, std::size_t horizon);

struct RunOptions {
  std::size_t initial_state = 0;
  std::size_t evi_max_iterations = 1'000'000;
};

/// Runs the agent for exactly m.horizon() steps.
///
/// Each episode snapshots the statistics window, builds confidence sets at
/// t_k, computes the optimistic policy with accuracy 1/sqrt(t_k) and follows
/// it until some state-action's in-episode count reaches max{1, N_k}. A
/// restart (Ucrl2R, Ucrl2RW) clears the history and forces a new episode;
/// t_k stays the global step index.
///
/// EVI failures are rethrown as NumericError carrying the episode start.
RunTrace run_agent(const AgentConfig& cfg, const SwitchingMdp& m, std::uint64_t seed,
                   const RunOptions& opts = {});

}  // namespace swucrl
