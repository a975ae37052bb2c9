#include "doctest.h"

#include "vcsim/scenarios/suite.hpp"

using namespace vcsim;
using namespace vcsim::scenarios;

TEST_CASE("all-honest lifecycle: open, update, optimistic close, zero losses") {
    auto report = run_scenario(optimistic_lifecycle(3, 42));
    CHECK(report.vc_opened);
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(report.liveness);
    CHECK(check_balance_security(report));
    for (const auto& [who, loss] : report.losses) CHECK(loss == 0);
    // The optimistic virtual-channel close leaves no trace on-chain.
    CHECK(count_onchain_txs(report, tx_phase::vc_close).party_txs == 0);
    CHECK(count_onchain_txs(report, tx_phase::vc_close).warden_txs == 0);
    CHECK(report.violations.empty());
}

TEST_CASE("determinism: identical scenario and seed give identical traces") {
    auto a = run_scenario(optimistic_lifecycle(2, 9));
    auto b = run_scenario(optimistic_lifecycle(2, 9));
    auto c = run_scenario(optimistic_lifecycle(2, 10));
    CHECK(a.trace_digest == b.trace_digest);
    CHECK(a.trace_digest != c.trace_digest);
}

TEST_CASE("state-splitting collusion closes both contracts with one state") {
    for (bool forced : {false, true}) {
        auto report = run_scenario(collusion_double_state(3, forced ? 21 : 20, forced));
        CHECK(report.completed);
        CHECK(report.all_closed);
        CHECK(check_same_state_closure(report));
        CHECK(check_balance_security(report));
        std::size_t settled = 0;
        for (const auto& oc : report.contracts)
            if (oc.applied_ws) ++settled;
        CHECK(settled == 2);
    }
}

TEST_CASE("withheld newest state: the higher sequence propagates") {
    auto report = run_scenario(collusion_withheld_state(2, 33));
    CHECK(report.all_closed);
    CHECK(check_same_state_closure(report));
    CHECK(check_balance_security(report));
    // Both contracts must have converged on the withheld (higher) sequence.
    for (const auto& oc : report.contracts) {
        REQUIRE(oc.applied_ws);
        CHECK(oc.applied_ws->state.seq == 4);  // two updates on top of seq 1... plus split
    }
}

TEST_CASE("offline intermediary: both ends close unilaterally, nobody loses") {
    auto report = run_scenario(ingrid_offline(3, 5));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(report.liveness);
    CHECK(check_balance_security(report));
}

TEST_CASE("offline end party: the intermediary learns the state first") {
    auto report = run_scenario(end_party_offline(3, 6));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(report.liveness);
    CHECK(check_balance_security(report));
}

TEST_CASE("both ends offline: the intermediary settles both sides") {
    auto report = run_scenario(both_ends_offline(3, 7));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(report.liveness);
    CHECK(check_balance_security(report));
    CHECK(check_same_state_closure(report));
}

TEST_CASE("offline pair returns later and liquidates cleanly") {
    auto report = run_scenario(ingrid_and_end_offline(2, 8));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(check_balance_security(report));
}

TEST_CASE("old-state closer gains nothing against an honest counterparty") {
    auto report = run_scenario(old_state_closer_vs_honest(3, 11));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(check_balance_security(report));
    CHECK(check_same_state_closure(report));
    // Every settled contract carries the newest committed state.
    for (const auto& oc : report.contracts) {
        REQUIRE(oc.applied_ws);
        CHECK(oc.applied_ws->state.seq == 4);
    }
}

TEST_CASE("stale wardens are slashed by the honest closer") {
    auto report = run_scenario(stale_wardens_punished(3, 13, 2));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(check_balance_security(report));
    bool slashed = false;
    for (const auto& oc : report.contracts)
        if (oc.valid_proofs == 2) slashed = true;
    CHECK(slashed);
}

TEST_CASE("collusive intermediary cannot hurt the honest end") {
    auto report = run_scenario(collusive_intermediary_case(2, 14));
    CHECK(report.completed);
    CHECK(report.all_closed);
    CHECK(check_balance_security(report));
}

TEST_CASE("censorship up to the horizon delays but never kills a close") {
    for (netsim::step_no horizon : {10ull, 50ull, 200ull}) {
        auto report = run_scenario(censored_close(2, 15, horizon));
        CHECK(report.completed);
        CHECK(report.liveness);
        CHECK(check_balance_security(report));
    }
}

TEST_CASE("ablation: disabling cross-checking lets collusion split the close") {
    CHECK(ablation_shows_breach(99));
    auto report = run_scenario(ablation_collusion(3, 99));
    CHECK_FALSE(check_same_state_closure(report));
}

TEST_CASE("cost-table counters") {
    SUBCASE("pessimistic vc close: 2 party txs, 7..10 warden publications") {
        auto report = run_scenario(count_pessimistic_vc_close(17));
        const auto counts = count_onchain_txs(report, tx_phase::vc_close);
        CHECK(counts.party_txs == 2);
        CHECK(counts.warden_txs >= 7);
        CHECK(counts.warden_txs <= 10);
    }
    SUBCASE("optimistic vc close: nothing on-chain; pc close: 2 txs per channel") {
        auto report = run_scenario(count_optimistic_close(18));
        CHECK(count_onchain_txs(report, tx_phase::vc_close).party_txs == 0);
        CHECK(count_onchain_txs(report, tx_phase::vc_close).warden_txs == 0);
        CHECK(count_onchain_txs(report, tx_phase::pc_close).party_txs == 4);  // two channels
        CHECK(count_onchain_txs(report, tx_phase::pc_close).warden_txs == 0);
    }
    SUBCASE("deploy and open: 2 party + 10 warden funding txs per channel") {
        auto report = run_scenario(count_optimistic_close(19));
        CHECK(count_onchain_txs(report, tx_phase::setup).party_txs == 4);
        CHECK(count_onchain_txs(report, tx_phase::setup).warden_txs == 20);
    }
    SUBCASE("pessimistic pc close: 1 party tx, 7..10 warden publications") {
        auto report = run_scenario(count_pessimistic_pc_close(20));
        const auto counts = count_onchain_txs(report, tx_phase::pc_close);
        CHECK(counts.party_txs == 1);
        CHECK(counts.warden_txs >= 7);
        CHECK(counts.warden_txs <= 10);
    }
}

TEST_CASE("four-party path: honest lifecycle and collusion closure") {
    auto honest = run_scenario(multihop_variant(optimistic_lifecycle(2, 23), 3));
    CHECK(honest.vc_opened);
    CHECK(honest.all_closed);
    CHECK(check_balance_security(honest));

    auto collusion = multihop_variant(collusion_double_state(2, 24, false), 3);
    // Path indices move with the longer path: the far end is party 3.
    collusion.parties.clear();
    collusion.parties[0] = party_spec{actors::party_behavior::double_state_colluder,
                                      core::make_party(3, "D"), 0, 0, false, false};
    collusion.parties[3] = party_spec{actors::party_behavior::double_state_colluder,
                                      core::make_party(0, "A"), 0, 0, false, false};
    auto report = run_scenario(collusion);
    CHECK(report.completed);
    CHECK(check_same_state_closure(report));
    CHECK(check_balance_security(report));
}

TEST_CASE("small suites stay green") {
    auto balance = balance_security_suite(30, 1001);
    CHECK_MESSAGE(balance.ok(),
                  (balance.failures.empty() ? std::string("ok") : balance.failures.front()));
    auto live = liveness_suite(12, 1002, {10, 50, 200});
    CHECK_MESSAGE(live.ok(),
                  (live.failures.empty() ? std::string("ok") : live.failures.front()));
    auto closure = same_state_closure_suite(6, 1003);
    CHECK_MESSAGE(closure.ok(),
                  (closure.failures.empty() ? std::string("ok") : closure.failures.front()));
}
