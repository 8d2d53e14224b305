#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swucrl/agents.hpp"
#include "swucrl/mdp.hpp"
#include "swucrl/trace.hpp"

namespace swucrl {

enum class DiameterMode { Exact, PaperProxy };

std::string_view to_string(DiameterMode mode);
DiameterMode parse_diameter_mode(std::string_view name);

struct ExperimentSpec {
  std::size_t num_states = 5;
  std::size_t num_actions = 3;
  std::size_t horizon = 100000;
  std::size_t num_changes = 2;
  double delta = 0.1;
  std::size_t num_runs = 50;
  std::uint64_t base_seed = 1;
  std::vector<AgentKind> agents{AgentKind::SwUcrl, AgentKind::Ucrl2R, AgentKind::Ucrl2RW};
  std::optional<std::size_t> window_override;
  DiameterMode diameter_mode = DiameterMode::PaperProxy;
  std::size_t jobs = 1;
  std::filesystem::path output_dir = "results";
  /// Retain instances and full traces in the result (small experiments only).
  bool keep_traces = false;

  /// Throws InputError on an unusable spec.
  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Fields absent from j keep the values already in `into`.
void merge_from_json(const nlohmann::json& j, ExperimentSpec& into);

/// Diameter used for W*: max(log_A S - 3, 1) in proxy mode, otherwise the
/// largest exact config diameter floored at 1.
double diameter_for_window(DiameterMode mode, std::size_t num_states, std::size_t num_actions,
                           const std::vector<MdpConfig>& configs);

/// Per-run audit of one SW-UCRL trace.
struct RunAudit {
  std::size_t run = 0;
  std::size_t window = 0;
  bool admissible = false;
  std::size_t episodes = 0;
  double episode_bound = 0.0;
  double episode_margin = 0.0;
  double weighted_visits = 0.0;
  double weighted_visit_bound = 0.0;
  double weighted_visit_margin = 0.0;
  std::size_t max_episode_length = 0;
  bool episode_cap_ok = true;

  /// Bound margins are only binding for admissible windows.
  bool passed() const {
    return episode_cap_ok && (!admissible || (episode_margin >= 0.0 && weighted_visit_margin >= 0.0));
  }
};

/// Audit computed from the trace alone: episode starts and in-episode visits
/// come from the step records, N_k from a brute-force recount of the window.
RunAudit audit_sw_ucrl_trace(const RunTrace& trace, std::size_t window, std::size_t num_states,
                             std::size_t num_actions, double delta);

struct AgentSummary {
  AgentKind kind;
  std::vector<double> mean_regret;  // index t-1
  std::vector<double> stderr_regret;
  double final_mean = 0.0;
  double final_stderr = 0.0;
  double mean_episodes = 0.0;
};

/// Mean per-step regret of one agent before and after a change point:
/// [max(1, c - W), c) versus [c, min(T, c + W)].
struct ChangeAdaptation {
  std::size_t change_point = 0;
  double pre_mean = 0.0;
  double post_mean = 0.0;
  bool bump() const { return post_mean > pre_mean; }
};

std::vector<ChangeAdaptation> change_adaptation(std::span<const double> mean_curve,
                                                std::span<const std::size_t> change_points,
                                                std::size_t window);

struct RunRecord {
  SwitchingMdp instance;
  std::vector<double> gains;
  std::vector<RunTrace> traces;  // parallel to spec.agents
  std::vector<std::uint64_t> seeds;
};

struct AggregateResult {
  ExperimentSpec spec;
  std::vector<AgentSummary> agents;
  std::vector<RunAudit> audits;
  std::vector<std::size_t> windows;  // per successful run
  std::vector<double> diameters;     // per successful run
  std::vector<std::pair<std::size_t, std::string>> failed_runs;
  std::size_t completed_runs = 0;
  std::vector<RunRecord> records;  // only with spec.keep_traces

  const AgentSummary* find(AgentKind kind) const;
  bool audits_passed() const;
  /// More than 1% of runs failed.
  bool too_many_failures() const;
};

/// Seed of agent `kind` in run `run`.
std::uint64_t agent_seed(std::uint64_t base_seed, std::size_t run, AgentKind kind);

/// Runs spec.num_runs instances on at most spec.jobs worker threads; results
/// are folded in run order so the output does not depend on scheduling.
AggregateResult run_experiment(const ExperimentSpec& spec);

/// Writes regret_<agent>.csv, audit.json, summary.json and plot.gp into dir.
void emit_outputs(const AggregateResult& agg, const std::filesystem::path& dir);

nlohmann::json summary_json(const AggregateResult& agg);
nlohmann::json audit_json(const AggregateResult& agg);

struct Proposition1Report {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // largest lhs / rhs seen
  std::string counterexample;
  bool passed() const { return violations == 0; }
};

/// Checks sum_k z_k / sqrt(Z_k) <= sqrt(Y) + (sqrt 2 + 1) sqrt(sum_k z_k) on
/// random non-negative integer sequences with x_1 = 0, x_{k+1} = x_k + z_k,
/// z_k <= x_k + y_k, Y >= y_1 >= ... >= y_n and Z_k = max{1, x_k + y_k}.
Proposition1Report proposition1_property_test(std::size_t trials, std::size_t max_n,
                                              std::uint64_t max_val, std::uint64_t seed);

/// Left and right side of the inequality for explicit sequences.
std::pair<double, double> proposition1_sides(std::span<const std::uint64_t> z,
                                             std::span<const std::uint64_t> y, std::uint64_t cap);

}  // namespace swucrl
