#include "vcsim/scenarios/suite.hpp"

namespace vcsim::scenarios {

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Sprinkle up to f Byzantine wardens per committee, cycling through the
// misbehavior catalog.
void assign_byzantine_wardens(scenario_config& cfg, std::uint64_t& rng, std::uint32_t hops) {
    for (std::uint32_t committee = 0; committee < hops; ++committee) {
        const std::uint32_t count = splitmix(rng) % (cfg.f + 1);
        for (std::uint32_t k = 0; k < count; ++k) {
            warden_spec spec;
            switch (splitmix(rng) % 4) {
                case 0:
                    spec.behavior = actors::warden_behavior::stale_publisher;
                    spec.stale_seq = 1 + splitmix(rng) % 2;
                    break;
                case 1:
                    spec.behavior = actors::warden_behavior::crash;
                    spec.crash_at_close = true;
                    break;
                case 2:
                    spec.behavior = actors::warden_behavior::double_signer;
                    break;
                case 3:
                    spec.behavior = actors::warden_behavior::withholder;
                    spec.withhold_target_party = 0;
                    break;
            }
            cfg.wardens["W" + std::to_string(committee) + "." + std::to_string(k)] = spec;
        }
    }
}

scenario_config pessimistic_case(std::size_t which, std::uint32_t f, std::uint64_t seed,
                                 std::uint32_t hops) {
    scenario_config cfg;
    switch (which % 9) {
        case 0: cfg = optimistic_lifecycle(f, seed); break;
        case 1: cfg = ingrid_offline(f, seed); break;
        case 2: cfg = end_party_offline(f, seed); break;
        case 3: cfg = both_ends_offline(f, seed); break;
        case 4: cfg = ingrid_and_end_offline(f, seed); break;
        case 5: cfg = old_state_closer_vs_honest(f, seed); break;
        case 6: cfg = collusion_double_state(f, seed, seed % 2 == 0); break;
        case 7: cfg = collusive_intermediary_case(f, seed); break;
        case 8: cfg = inconsistent_funder_abort(f, seed); break;
    }
    if (hops > 2) {
        cfg = multihop_variant(cfg, hops);
        // Path indices shift with more parties: the far end and middle move.
        std::map<std::size_t, party_spec> remapped;
        for (auto& [idx, spec] : cfg.parties) {
            std::size_t where = idx;
            if (idx == 2) where = hops;           // far end
            else if (idx == 1) where = hops / 2;  // a middle party
            remapped[where] = spec;
            if (spec.behavior == actors::party_behavior::double_state_colluder) {
                // partners renamed below
            }
        }
        cfg.parties = std::move(remapped);
        for (auto& [idx, spec] : cfg.parties) {
            if (spec.behavior == actors::party_behavior::double_state_colluder)
                spec.collude_partner = idx == 0
                                           ? core::make_party(hops, std::string(1, 'A' + hops))
                                           : core::make_party(0, "A");
        }
        if (cfg.close_initiator == 2) cfg.close_initiator = hops;
        else if (cfg.close_initiator == 1) cfg.close_initiator = hops / 2;
    }
    return cfg;
}

}  // namespace

suite_result balance_security_suite(std::size_t runs, std::uint64_t seed0, std::uint32_t hops) {
    suite_result out;
    std::uint64_t rng = seed0;
    for (std::size_t i = 0; i < runs; ++i) {
        const std::uint64_t seed = splitmix(rng) | 1;
        auto cfg = pessimistic_case(i, 1 + i % 3, seed, hops);
        assign_byzantine_wardens(cfg, rng, hops);
        auto report = run_scenario(cfg);
        ++out.runs;
        out.conservation_breaches += report.violations.size();
        if (check_balance_security(report))
            ++out.passed;
        else
            out.failures.push_back(cfg.name + " seed=" + std::to_string(seed) + "\n" +
                                   report.summary());
    }
    return out;
}

suite_result liveness_suite(std::size_t runs, std::uint64_t seed0,
                            const std::vector<netsim::step_no>& horizons,
                            std::uint32_t hops) {
    suite_result out;
    std::uint64_t rng = seed0;
    for (std::size_t i = 0; i < runs; ++i) {
        const std::uint64_t seed = splitmix(rng) | 1;
        const auto horizon = horizons[i % horizons.size()];
        scenario_config cfg;
        switch (i % 4) {
            case 0: cfg = censored_close(1 + i % 3, seed, horizon); break;
            case 1: cfg = ingrid_offline(1 + i % 3, seed); break;
            case 2: cfg = optimistic_lifecycle(1 + i % 3, seed); break;
            case 3: cfg = both_ends_offline(1 + i % 3, seed); break;
        }
        cfg.policy.horizon = horizon;
        assign_byzantine_wardens(cfg, rng, 2);
        if (hops > 2) cfg = multihop_variant(cfg, hops);
        auto report = run_scenario(cfg);
        ++out.runs;
        out.conservation_breaches += report.violations.size();
        if (check_liveness(report))
            ++out.passed;
        else
            out.failures.push_back(cfg.name + " seed=" + std::to_string(seed) + " H=" +
                                   std::to_string(horizon) + "\n" + report.summary());
    }
    return out;
}

suite_result same_state_closure_suite(std::size_t runs_per_f, std::uint64_t seed0,
                                      std::uint32_t hops) {
    suite_result out;
    std::uint64_t rng = seed0;
    for (std::uint32_t f = 1; f <= 3; ++f) {
        for (std::size_t i = 0; i < runs_per_f; ++i) {
            const std::uint64_t seed = splitmix(rng) | 1;
            scenario_config cfg;
            switch (i % 3) {
                case 0: cfg = collusion_double_state(f, seed, false); break;
                case 1: cfg = collusion_double_state(f, seed, true); break;
                case 2: cfg = collusion_withheld_state(f, seed); break;
            }
            if (hops > 2) {
                cfg = pessimistic_case(6, f, seed, hops);
                if (i % 3 == 1) cfg.force_simultaneous_crosscheck = true;
            }
            auto report = run_scenario(cfg);
            ++out.runs;
            out.conservation_breaches += report.violations.size();
            const bool closed_both = [&] {
                std::size_t settled = 0;
                for (const auto& oc : report.contracts)
                    if (oc.applied_ws) ++settled;
                return settled >= 2;
            }();
            if (check_same_state_closure(report) && closed_both &&
                check_balance_security(report))
                ++out.passed;
            else
                out.failures.push_back(cfg.name + " f=" + std::to_string(f) + " seed=" +
                                       std::to_string(seed) + "\n" + report.summary());
        }
    }
    return out;
}

bool ablation_shows_breach(std::uint64_t seed) {
    auto report = run_scenario(ablation_collusion(3, seed));
    return !check_balance_security(report) || !check_same_state_closure(report);
}

}  // namespace vcsim::scenarios
