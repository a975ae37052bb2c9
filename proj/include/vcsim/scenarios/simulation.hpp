#pragma once

#include "vcsim/actors/party.hpp"
#include "vcsim/actors/warden.hpp"
#include "vcsim/scenarios/report.hpp"

namespace vcsim::scenarios {

struct party_spec {
    actors::party_behavior behavior = actors::party_behavior::honest;
    actor_id collude_partner;
    core::seq_no old_close_seq = 0;
    coins funder_delta = 0;
    bool offline_at_close = false;   // goes dark when the close phase starts
    bool returns_later = false;      // comes back online for the final closes
};

struct warden_spec {
    actors::warden_behavior behavior = actors::warden_behavior::honest;
    core::seq_no stale_seq = 0;
    std::uint32_t withhold_target_party = 0;  // index into the party list
    bool crash_at_close = false;              // crashes before publications
};

struct update_step {
    std::size_t initiator = 0;  // index into the party path (an end)
    coins amount = 1;
    std::uint8_t kind = 0;  // 0 plain, 1 colluders' split, 2 withheld from last committee
};

enum class close_style : std::uint8_t {
    none,            // nobody initiates; channels stay open
    optimistic,      // collaborative close initiated by one end
    unilateral,      // initiator goes straight to the chain
    collab_fallback, // collaborative first, unilateral on patience
    simultaneous_unilateral,  // both ends register at once (collusion case)
    intermediary_direct,      // the intermediary closes both sides in sequence
};

struct scenario_config {
    std::string name = "scenario";
    std::uint32_t hops = 2;  // parties on the path = hops + 1
    std::uint32_t f = 3;
    coins vc_balance = 10;
    coins vc_left_share = 4;      // initial state: (left, balance - left)
    coins deposit_slack = 6;      // free balance on top of each lock share
    coins closing_fee = 0;        // per contract, escrowed half/half
    std::uint64_t seed = 1;
    netsim::adversary_policy policy;

    std::vector<update_step> updates;
    std::map<std::size_t, party_spec> parties;   // by path index; default honest
    std::map<std::string, warden_spec> wardens;  // by warden label; default honest

    close_style close = close_style::optimistic;
    std::size_t close_initiator = 0;
    bool skip_open = false;        // exercise a plain payment channel only
    bool pc_close_at_end = true;   // collaborative channel closes after the virtual part
    bool pessimistic_pc_close = false;  // force the unilateral channel close path
    bool force_simultaneous_crosscheck = false;
    bool disable_crosscheck = false;

    netsim::step_no patience = 0;   // 0: derived from the horizon
    netsim::step_no max_steps = 0;  // 0: derived
};

// Builds the whole cast, runs the scenario to quiescence, and produces the
// report. Each run is hermetic: fresh kernel, ledger and actors.
execution_report run_scenario(const scenario_config& cfg);

// 4-party variant builder used by the multi-hop suites: same knobs, longer
// path.
scenario_config multihop_variant(scenario_config cfg, std::uint32_t hops);

}  // namespace vcsim::scenarios
