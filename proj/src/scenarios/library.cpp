#include "vcsim/scenarios/library.hpp"

namespace vcsim::scenarios {

namespace {
scenario_config base(std::uint32_t f, std::uint64_t seed) {
    scenario_config cfg;
    cfg.hops = 2;
    cfg.f = f;
    cfg.vc_balance = 10;
    cfg.vc_left_share = 4;
    cfg.deposit_slack = 6;
    cfg.seed = seed;
    cfg.policy.seed = seed;
    cfg.policy.horizon = 50;
    cfg.policy.jitter = 3;
    cfg.updates = {{0, 2, 0}, {2, 1, 0}, {0, 1, 0}};
    return cfg;
}
}  // namespace

scenario_config optimistic_lifecycle(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "optimistic";
    cfg.close = close_style::optimistic;
    return cfg;
}

scenario_config collusion_double_state(std::uint32_t f, std::uint64_t seed,
                                       bool force_same_block) {
    auto cfg = base(f, seed);
    cfg.name = force_same_block ? "collusion_double_state_same_block"
                                : "collusion_double_state";
    cfg.parties[0] = party_spec{actors::party_behavior::double_state_colluder,
                                core::make_party(2, "B"), 0, 0, false, false};
    cfg.parties[2] = party_spec{actors::party_behavior::double_state_colluder,
                                core::make_party(0, "A"), 0, 0, false, false};
    cfg.updates = {{0, 2, 0}, {0, 3, 1}};  // last update splits the committees
    cfg.close = close_style::simultaneous_unilateral;
    cfg.force_simultaneous_crosscheck = force_same_block;
    return cfg;
}

scenario_config collusion_withheld_state(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "collusion_withheld_state";
    cfg.parties[0] = party_spec{actors::party_behavior::double_state_colluder,
                                core::make_party(2, "B"), 0, 0, false, false};
    cfg.parties[2] = party_spec{actors::party_behavior::double_state_colluder,
                                core::make_party(0, "A"), 0, 0, false, false};
    cfg.updates = {{0, 2, 0}, {0, 3, 2}};  // newest state withheld from the far committee
    cfg.close = close_style::simultaneous_unilateral;
    return cfg;
}

scenario_config ingrid_offline(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "ingrid_offline";
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config end_party_offline(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "end_party_offline";
    cfg.parties[2] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config both_ends_offline(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "both_ends_offline";
    cfg.parties[0] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.parties[2] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.close = close_style::intermediary_direct;
    cfg.close_initiator = 1;
    return cfg;
}

scenario_config ingrid_and_end_offline(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "ingrid_and_end_offline";
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, true};
    cfg.parties[2] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, true};
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config old_state_closer_vs_honest(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "old_state_closer";
    cfg.parties[2] = party_spec{actors::party_behavior::old_state_closer, {}, 2, 0, false,
                                false};
    cfg.close = close_style::simultaneous_unilateral;
    return cfg;
}

scenario_config stale_wardens_punished(std::uint32_t f, std::uint64_t seed,
                                       std::uint32_t stale_count) {
    auto cfg = base(f, seed);
    cfg.name = "stale_wardens_punished";
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    for (std::uint32_t k = 0; k < stale_count && k < f; ++k)
        cfg.wardens["W0." + std::to_string(k)] =
            warden_spec{actors::warden_behavior::stale_publisher, 2, 0, false};
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config collusive_intermediary_case(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "collusive_intermediary";
    cfg.parties[0] = party_spec{actors::party_behavior::old_state_closer, {}, 2, 0, false,
                                false};
    cfg.parties[1] =
        party_spec{actors::party_behavior::collusive_intermediary, {}, 0, 0, false, false};
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config inconsistent_funder_abort(std::uint32_t f, std::uint64_t seed) {
    auto cfg = base(f, seed);
    cfg.name = "inconsistent_funder";
    cfg.parties[1] =
        party_spec{actors::party_behavior::inconsistent_funder, {}, 0, 2, false, false};
    cfg.updates.clear();
    cfg.close = close_style::none;
    return cfg;
}

scenario_config censored_close(std::uint32_t f, std::uint64_t seed, netsim::step_no horizon) {
    auto cfg = base(f, seed);
    cfg.name = "censored_close";
    cfg.policy.horizon = horizon;
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    // Every transaction from the closing party crawls to the chain at the
    // horizon bound.
    netsim::censorship_rule rule;
    rule.from = core::make_party(0, "A");
    rule.kind = "chain_tx";
    rule.delay = horizon;
    cfg.policy.censorship.push_back(rule);
    cfg.close = close_style::collab_fallback;
    cfg.close_initiator = 0;
    return cfg;
}

scenario_config ablation_collusion(std::uint32_t f, std::uint64_t seed) {
    auto cfg = collusion_double_state(f, seed, false);
    cfg.name = "ablation_collusion";
    cfg.disable_crosscheck = true;
    return cfg;
}

scenario_config count_pessimistic_vc_close(std::uint64_t seed) {
    auto cfg = base(3, seed);
    cfg.name = "count_pessimistic_vc_close";
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.parties[2] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.close = close_style::unilateral;
    cfg.close_initiator = 0;
    cfg.pc_close_at_end = false;
    return cfg;
}

scenario_config count_optimistic_close(std::uint64_t seed) {
    auto cfg = base(3, seed);
    cfg.name = "count_optimistic_close";
    cfg.close = close_style::optimistic;
    return cfg;
}

scenario_config count_pessimistic_pc_close(std::uint64_t seed) {
    auto cfg = base(3, seed);
    cfg.name = "count_pessimistic_pc_close";
    cfg.skip_open = true;
    cfg.updates = {{0, 2, 0}};
    cfg.parties[1] = party_spec{actors::party_behavior::offline, {}, 0, 0, true, false};
    cfg.close = close_style::none;
    cfg.pessimistic_pc_close = true;
    return cfg;
}

std::vector<std::string> scenario_names() {
    return {"optimistic",
            "collusion_double_state",
            "collusion_double_state_same_block",
            "collusion_withheld_state",
            "ingrid_offline",
            "end_party_offline",
            "both_ends_offline",
            "ingrid_and_end_offline",
            "old_state_closer",
            "stale_wardens_punished",
            "collusive_intermediary",
            "inconsistent_funder",
            "censored_close",
            "ablation_collusion",
            "count_pessimistic_vc_close",
            "count_optimistic_close",
            "count_pessimistic_pc_close"};
}

std::optional<scenario_config> scenario_by_name(const std::string& name, std::uint32_t f,
                                                std::uint64_t seed) {
    if (name == "optimistic") return optimistic_lifecycle(f, seed);
    if (name == "collusion_double_state") return collusion_double_state(f, seed, false);
    if (name == "collusion_double_state_same_block")
        return collusion_double_state(f, seed, true);
    if (name == "collusion_withheld_state") return collusion_withheld_state(f, seed);
    if (name == "ingrid_offline") return ingrid_offline(f, seed);
    if (name == "end_party_offline") return end_party_offline(f, seed);
    if (name == "both_ends_offline") return both_ends_offline(f, seed);
    if (name == "ingrid_and_end_offline") return ingrid_and_end_offline(f, seed);
    if (name == "old_state_closer") return old_state_closer_vs_honest(f, seed);
    if (name == "stale_wardens_punished") return stale_wardens_punished(f, seed, 2);
    if (name == "collusive_intermediary") return collusive_intermediary_case(f, seed);
    if (name == "inconsistent_funder") return inconsistent_funder_abort(f, seed);
    if (name == "censored_close") return censored_close(f, seed, 50);
    if (name == "ablation_collusion") return ablation_collusion(f, seed);
    if (name == "count_pessimistic_vc_close") return count_pessimistic_vc_close(seed);
    if (name == "count_optimistic_close") return count_optimistic_close(seed);
    if (name == "count_pessimistic_pc_close") return count_pessimistic_pc_close(seed);
    return std::nullopt;
}

}  // namespace vcsim::scenarios
