#pragma once

#include "vcsim/scenarios/simulation.hpp"

namespace vcsim::scenarios {

// Canned scenarios, parameterized by committee fault bound and seed.
scenario_config optimistic_lifecycle(std::uint32_t f, std::uint64_t seed);
scenario_config collusion_double_state(std::uint32_t f, std::uint64_t seed,
                                       bool force_same_block);
scenario_config collusion_withheld_state(std::uint32_t f, std::uint64_t seed);
scenario_config ingrid_offline(std::uint32_t f, std::uint64_t seed);
scenario_config end_party_offline(std::uint32_t f, std::uint64_t seed);
scenario_config both_ends_offline(std::uint32_t f, std::uint64_t seed);
scenario_config ingrid_and_end_offline(std::uint32_t f, std::uint64_t seed);
scenario_config old_state_closer_vs_honest(std::uint32_t f, std::uint64_t seed);
scenario_config stale_wardens_punished(std::uint32_t f, std::uint64_t seed,
                                       std::uint32_t stale_count);
scenario_config collusive_intermediary_case(std::uint32_t f, std::uint64_t seed);
scenario_config inconsistent_funder_abort(std::uint32_t f, std::uint64_t seed);
scenario_config censored_close(std::uint32_t f, std::uint64_t seed, netsim::step_no horizon);
scenario_config ablation_collusion(std::uint32_t f, std::uint64_t seed);

// Transaction-count scenarios mirroring the cost table rows.
scenario_config count_pessimistic_vc_close(std::uint64_t seed);
scenario_config count_optimistic_close(std::uint64_t seed);
scenario_config count_pessimistic_pc_close(std::uint64_t seed);

std::vector<std::string> scenario_names();
std::optional<scenario_config> scenario_by_name(const std::string& name, std::uint32_t f,
                                                std::uint64_t seed);

}  // namespace vcsim::scenarios
