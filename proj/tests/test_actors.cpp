#include "doctest.h"

#include "vcsim/actors/warden.hpp"
#include "vcsim/core/crypto.hpp"
#include "vcsim/scenarios/library.hpp"

using namespace vcsim;
using namespace vcsim::actors;
using core::actor_id;

namespace {

struct warden_rig {
    netsim::kernel kernel{netsim::adversary_policy{1, 50, 1, {}, {}}};
    actor_id alice = core::make_party(0, "A");
    actor_id ingrid = core::make_party(1, "I");
    warden w;
    std::vector<core::archived_warden_sig> sigs_seen;

    warden_rig(warden_config cfg = {}) : w([&] {
        cfg.id = core::make_warden(0, "W0");
        return cfg;
    }()) {
        core::channel_state funding;
        funding.id = 1;
        funding.seq = 1;
        funding.balances[alice] = 5;
        funding.balances[ingrid] = 5;
        core::update_announcement m;
        m.state = funding;
        m.end_party_sigs = {core::sign_announcement(alice, funding),
                            core::sign_announcement(ingrid, funding)};
        w.add_pc_channel(1, 1, {alice, ingrid}, m);
        kernel.register_handler(netsim::actor_ep(w.id()),
                                [this](const netsim::envelope& env, netsim::context& ctx) {
                                    w.on_message(env, ctx);
                                });
        auto catcher = [this](const netsim::envelope& env, netsim::context&) {
            if (const auto* us = std::get_if<proto::update_sig>(&env.payload))
                sigs_seen.push_back(us->sig);
        };
        kernel.register_handler(netsim::actor_ep(alice), catcher);
        kernel.register_handler(netsim::actor_ep(ingrid), catcher);
    }

    core::update_announcement state_at(core::seq_no seq, core::coins a) {
        core::channel_state s;
        s.id = 1;
        s.seq = seq;
        s.balances[alice] = a;
        s.balances[ingrid] = 10 - a;
        core::update_announcement m;
        m.state = s;
        m.end_party_sigs = {core::sign_announcement(alice, s),
                            core::sign_announcement(ingrid, s)};
        return m;
    }

    void deliver_update(const core::update_announcement& m) {
        kernel.send(netsim::actor_ep(alice), netsim::actor_ep(w.id()), proto::update_msg{m});
        kernel.run_until_quiescent(100);
    }
};

}  // namespace

TEST_CASE("warden signs exactly-one-higher sequences and replies to both parties") {
    warden_rig r;
    r.deliver_update(r.state_at(2, 4));
    REQUIRE(r.w.highest_signed(1));
    CHECK(r.w.highest_signed(1)->state.seq == 2);
    CHECK(r.sigs_seen.size() == 2);  // one signature to each party
}

TEST_CASE("warden ignores sequence gaps") {
    warden_rig r;
    r.deliver_update(r.state_at(3, 4));  // stored 1, jump to 3
    CHECK(r.w.highest_signed(1)->state.seq == 1);
    CHECK(r.sigs_seen.empty());
}

TEST_CASE("warden ignores a missing counterparty signature") {
    warden_rig r;
    auto m = r.state_at(2, 4);
    m.end_party_sigs.pop_back();
    r.deliver_update(m);
    CHECK(r.w.highest_signed(1)->state.seq == 1);
}

TEST_CASE("honest warden never double-signs; the double-signer does") {
    auto run = [](warden_behavior b) {
        warden_config cfg;
        cfg.behavior = b;
        warden_rig r(cfg);
        r.deliver_update(r.state_at(2, 4));
        r.deliver_update(r.state_at(2, 9));  // same sequence, different value
        return r.sigs_seen.size();
    };
    CHECK(run(warden_behavior::honest) == 2);        // only the first signed
    CHECK(run(warden_behavior::double_signer) == 4); // both signed
}

TEST_CASE("re-delivery of the identical announcement is idempotent") {
    warden_rig r;
    auto m = r.state_at(2, 4);
    r.deliver_update(m);
    r.deliver_update(m);
    CHECK(r.sigs_seen.size() == 2);
}

TEST_CASE("withholder skips its target") {
    warden_config cfg;
    cfg.behavior = warden_behavior::withholder;
    cfg.withhold_target = core::make_party(0, "A");
    warden_rig r(cfg);
    r.deliver_update(r.state_at(2, 4));
    CHECK(r.sigs_seen.size() == 1);  // only the non-target party heard back
}

// End-to-end actor flows are covered through scenarios; these pin the edge
// cases the protocol text names.

TEST_CASE("open aborts on mismatched pre-registers") {
    // An inconsistent funder proposes a wrong lock; the counterparty refuses
    // and nobody ends up with an open virtual channel.
    auto cfg = scenarios::inconsistent_funder_abort(2, 7);
    auto report = scenarios::run_scenario(cfg);
    CHECK(report.open_aborted);
    CHECK_FALSE(report.vc_opened);
    CHECK(report.completed);
    CHECK(scenarios::check_balance_security(report));
    CHECK(report.all_closed);  // channels liquidate collaboratively
}

TEST_CASE("offline party during open leaves the channel unopened") {
    auto cfg = scenarios::optimistic_lifecycle(1, 5);
    cfg.name = "open_with_offline_end";
    // The far end never comes up: funding happens (it is on-chain), the open
    // protocol stalls, close degrades to liquidation.
    cfg.parties[2] = scenarios::party_spec{actors::party_behavior::offline, {}, 0, 0, false,
                                           false};
    cfg.updates.clear();
    cfg.close = scenarios::close_style::none;
    cfg.max_steps = 4000;
    auto report = scenarios::run_scenario(cfg);
    CHECK_FALSE(report.vc_opened);
}
