#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "swucrl/mdp.hpp"

namespace swucrl {

// Instance document:
//   {"S":int, "A":int, "horizon":int, "change_points":[int],
//    "configs":[{"mean_reward":[[...]], "transition":[[[...]]]}]}
// nested row-major as (s, a[, s']). "horizon" is optional on read and
// defaults to c_l + 1 (or 2 for a stationary instance).

nlohmann::json to_json(const MdpConfig& c);
nlohmann::json to_json(const SwitchingMdp& m);

MdpConfig mdp_config_from_json(const nlohmann::json& j, std::size_t num_states,
                               std::size_t num_actions);
SwitchingMdp switching_mdp_from_json(const nlohmann::json& j);

/// Doubles are written in shortest round-trip form, so reading back is exact.
void write_instance(const SwitchingMdp& m, std::ostream& os);
SwitchingMdp read_instance(std::istream& is);

void save_instance(const SwitchingMdp& m, const std::filesystem::path& path);
SwitchingMdp load_instance(const std::filesystem::path& path);

}  // namespace swucrl
