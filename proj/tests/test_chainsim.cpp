#include "doctest.h"

#include "vcsim/chainsim/ledger.hpp"
#include "vcsim/core/crypto.hpp"
#include "vcsim/core/quorum.hpp"

using namespace vcsim;
using namespace vcsim::chainsim;
using core::actor_id;
using core::coins;

namespace {

struct rig {
    std::uint32_t f = 3;
    actor_id alice = core::make_party(0, "A");
    actor_id ingrid = core::make_party(1, "I");
    actor_id bob = core::make_party(2, "B");
    std::vector<actor_id> committee_a, committee_b;
    ledger chain;
    core::register_tx reg;
    core::update_announcement vc_seq[8];  // both-signed per seq
    core::update_announcement funding_a;

    rig() {
        for (std::uint32_t i = 0; i < core::committee_size(f); ++i)
            committee_a.push_back(core::make_warden(i, "Wa" + std::to_string(i)));
        for (std::uint32_t i = 100; i < 100 + core::committee_size(f); ++i)
            committee_b.push_back(core::make_warden(i, "Wb" + std::to_string(i)));

        core::channel_state s1;
        s1.id = 100;
        s1.seq = 1;
        s1.balances[alice] = 4;
        s1.balances[bob] = 6;
        core::contract_info ci;
        ci.contracts = {1, 2};
        ci.leader = 1;
        REQUIRE(core::make_register_tx({alice, ingrid, bob}, {committee_a, committee_b}, s1,
                                       10, ci, reg) == core::register_error::ok);
        for (core::seq_no q = 1; q <= 7; ++q) {
            core::channel_state s = s1;
            s.seq = q;
            s.balances[alice] = 4 - (q % 4);
            s.balances[bob] = 6 + (q % 4);
            vc_seq[q].state = s;
            vc_seq[q].end_party_sigs = {core::sign_announcement(alice, s),
                                        core::sign_announcement(bob, s)};
        }
    }

    deploy_channel_body deploy_body(coins fee = 0) {
        deploy_channel_body dep;
        dep.contract = 1;
        dep.pc_channel = 1;
        dep.parties = {alice, ingrid};
        dep.deposits[alice] = 10;
        dep.deposits[ingrid] = 12;
        dep.committee = committee_a;
        dep.f = f;
        dep.collateral_per_warden = 4;
        dep.fee_contributions[alice] = fee - fee / 2;
        dep.fee_contributions[ingrid] = fee / 2;
        return dep;
    }

    // Deploy and fully fund contract 1, with the virtual lock already in the
    // committed channel state the wardens know.
    void fund(coins fee = 0) {
        const auto dep = deploy_body(fee);
        chain.credit_external(alice, 100);
        chain.credit_external(ingrid, 100);
        for (const auto& w : committee_a) chain.credit_external(w, 10);
        std::vector<tx> txs;
        txs.push_back(make_actor_tx(tx_kind::deploy_channel, alice, dep));
        txs.push_back(make_actor_tx(tx_kind::fund_party, ingrid, fund_party_body{1}));
        for (const auto& w : committee_a)
            txs.push_back(make_actor_tx(tx_kind::fund_warden, w, fund_warden_body{1}));
        auto res = chain.mine_block(std::move(txs));
        for (const auto& at : res.mined.txs) REQUIRE(at.status == apply_status::applied);

        core::channel_state locked;
        locked.id = 1;
        locked.seq = 2;
        locked.balances[alice] = 10 - 4;
        locked.balances[ingrid] = 12 - 6;
        core::lock_entry lock;
        lock.vc_id = 100;
        lock.amounts[alice] = 4;
        lock.amounts[ingrid] = 6;
        locked.locks.push_back(lock);
        funding_a.state = locked;
        funding_a.end_party_sigs = {core::sign_announcement(alice, locked),
                                    core::sign_announcement(ingrid, locked)};
    }

    publication_entry pub(const actor_id& w, core::seq_no vc_seq_no) {
        publication_entry e;
        e.warden = w;
        core::signed_state_publication pc;
        pc.warden = w;
        pc.announcement = funding_a;
        pc.warden_sig = core::sign_announcement(w, funding_a.state);
        e.pc = pc;
        core::signed_state_publication vc;
        vc.warden = w;
        vc.announcement = vc_seq[vc_seq_no];
        vc.warden_sig = core::sign_announcement(w, vc_seq[vc_seq_no].state);
        e.vc = vc;
        return e;
    }

    void mine(std::vector<tx> txs, bool expect_applied = true) {
        auto res = chain.mine_block(std::move(txs));
        if (expect_applied)
            for (const auto& at : res.mined.txs) REQUIRE(at.status != apply_status::rejected);
        last = std::move(res);
    }
    block_result last;
};

}  // namespace

TEST_CASE("settlement rules: wardens' state and fee split") {
    // f=3: the pool is the first 7 valid publications; highest sequence wins.
    rig r;
    settlement_input in;
    in.f = 3;
    in.warden_collateral = 4;
    in.fee_pot = 7;
    for (int i = 0; i < 3; ++i) in.publications.push_back(r.pub(r.committee_a[i], 4));
    for (int i = 3; i < 7; ++i) in.publications.push_back(r.pub(r.committee_a[i], 7));

    SUBCASE("below threshold undecided") {
        in.publications.pop_back();
        auto res = evaluate_unilateral_close(in);
        CHECK_FALSE(res.decided);
    }
    SUBCASE("max sequence wins: {4,4,4,7,7,7,7} -> 7") {
        auto res = evaluate_unilateral_close(in);
        // oracle: max over the list
        core::seq_no expect = 0;
        for (const auto& e : in.publications)
            expect = std::max(expect, e.vc->announcement.state.seq);
        REQUIRE(res.decided);
        CHECK(res.ws->state.seq == expect);
        CHECK(res.ws->state.seq == 7);
    }
    SUBCASE("fee 7 split equally: 7 wardens get 1 each") {
        auto res = evaluate_unilateral_close(in);
        CHECK(res.fee_payments.size() == 7);
        for (const auto& [_, amt] : res.fee_payments) CHECK(amt == 1);
        CHECK(res.fee_paid_total == 7);
        CHECK_FALSE(res.fee_shortfall);
    }
    SUBCASE("fee 0 still settles") {
        in.fee_pot = 0;
        auto res = evaluate_unilateral_close(in);
        CHECK(res.decided);
        CHECK(res.fee_paid_total == 0);
    }
    SUBCASE("duplicate publisher counted once") {
        in.publications.pop_back();
        in.publications.push_back(r.pub(r.committee_a[0], 7));  // same warden again
        auto res = evaluate_unilateral_close(in);
        CHECK_FALSE(res.decided);
    }
    SUBCASE("proof exclusion refills from later publications") {
        for (int i = 7; i < 10; ++i) in.publications.push_back(r.pub(r.committee_a[i], 7));
        in.proven_fraud = {r.committee_a[3], r.committee_a[4]};
        auto res = evaluate_unilateral_close(in);
        REQUIRE(res.decided);
        CHECK(res.valid_proofs == 2);
        CHECK(res.slash_total == 8);  // payout oracle: 2 x collateral 4
        CHECK(res.ws->state.seq == 7);
        CHECK(res.fee_payments.count(r.committee_a[3]) == 0);
    }
    SUBCASE("x >= f+1 flags the overflow") {
        in.proven_fraud = {r.committee_a[3], r.committee_a[4], r.committee_a[5],
                           r.committee_a[6]};
        auto res = evaluate_unilateral_close(in);
        CHECK(res.fraud_overflow);
        CHECK(res.slash_total == 16);
    }
}

TEST_CASE("register handling") {
    rig r;
    r.fund();
    auto* c = r.chain.find_contract(1);
    REQUIRE(c);
    CHECK(c->phase() == contract_phase::open);

    SUBCASE("valid register moves to vc_registered") {
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
        CHECK(c->phase() == contract_phase::vc_registered);
        CHECK(c->is_leader());
    }
    SUBCASE("register missing a signature is rejected") {
        auto bad = r.reg;
        bad.party_sigs.pop_back();
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, bad})},
               false);
        CHECK(r.last.mined.txs[0].status == apply_status::rejected);
        CHECK(c->phase() == contract_phase::open);
    }
    SUBCASE("duplicate register is an idempotent no-op") {
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
        r.mine({make_actor_tx(tx_kind::register_vc, r.bob, register_vc_body{1, r.reg})},
               false);
        CHECK(r.last.mined.txs[0].status == apply_status::ignored);
        CHECK(c->phase() == contract_phase::vc_registered);
    }
}

TEST_CASE("publication collection and cross-check emission") {
    rig r;
    r.fund();
    r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
    auto* c = r.chain.find_contract(1);

    std::vector<tx> six;
    for (int i = 0; i < 6; ++i)
        six.push_back(make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                                    publish_state_body{1, r.pub(r.committee_a[i], 4)}));
    r.mine(std::move(six));
    CHECK(c->phase() == contract_phase::vc_collecting);
    CHECK(r.last.emissions.empty());

    SUBCASE("the 7th distinct publication decides and emits") {
        r.mine({make_actor_tx(tx_kind::publish_state, r.committee_a[6],
                              publish_state_body{1, r.pub(r.committee_a[6], 5)})});
        CHECK(c->phase() == contract_phase::vc_crosschecking);
        REQUIRE(c->decided_ws());
        CHECK(c->decided_ws()->state.seq == 5);
        REQUIRE(r.last.emissions.size() == 1);
        CHECK(r.last.emissions[0].to == 2);
        CHECK(r.last.emissions[0].ws->state.seq == 5);
    }
    SUBCASE("publication by a non-committee warden is rejected") {
        r.mine({make_actor_tx(tx_kind::publish_state, r.committee_b[0],
                              publish_state_body{1, r.pub(r.committee_b[0], 4)})},
               false);
        CHECK(r.last.mined.txs[0].status == apply_status::rejected);
    }
    SUBCASE("a second publication by the same warden is rejected") {
        r.mine({make_actor_tx(tx_kind::publish_state, r.committee_a[0],
                              publish_state_body{1, r.pub(r.committee_a[0], 7)})},
               false);
        CHECK(r.last.mined.txs[0].status == apply_status::rejected);
        CHECK(c->valid_publication_count() == 6);
    }
}

TEST_CASE("cross-check receiving rules") {
    rig r;
    r.fund();
    auto make_cc = [&](core::seq_no seq, contract_id from, bool null_reply = false) {
        cross_check_body cc;
        cc.from = from;
        cc.to = 1;
        if (!null_reply) cc.ws = r.vc_seq[seq];
        cc.reg = r.reg;
        return cc;
    };

    SUBCASE("undecided contract adopts the peer state and replies NULL") {
        // No register on this side yet: the embedded register carries it in.
        r.mine({make_contract_tx(tx_kind::cross_check, 2, make_cc(7, 2))});
        auto* c = r.chain.find_contract(1);
        REQUIRE(c->decided_ws());
        CHECK(c->decided_ws()->state.seq == 7);
        CHECK(c->ws_source() == ws_origin::adopted);
        REQUIRE(r.last.emissions.size() == 1);
        CHECK_FALSE(r.last.emissions[0].ws.has_value());  // NULL reply
        CHECK(r.last.emissions[0].is_reply);
    }
    SUBCASE("own publications never override an adopted state") {
        r.mine({make_contract_tx(tx_kind::cross_check, 2, make_cc(4, 2))});
        std::vector<tx> pubs;
        for (int i = 0; i < 7; ++i)
            pubs.push_back(make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                                         publish_state_body{1, r.pub(r.committee_a[i], 7)}));
        r.mine(std::move(pubs));
        auto* c = r.chain.find_contract(1);
        CHECK(c->decided_ws()->state.seq == 4);
    }
    SUBCASE("higher peer sequence wins after an own decision") {
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
        std::vector<tx> pubs;
        for (int i = 0; i < 7; ++i)
            pubs.push_back(make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                                         publish_state_body{1, r.pub(r.committee_a[i], 5)}));
        r.mine(std::move(pubs));
        auto* c = r.chain.find_contract(1);
        CHECK(c->decided_ws()->state.seq == 5);
        r.mine({make_contract_tx(tx_kind::cross_check, 2, make_cc(7, 2))});
        CHECK(c->decided_ws()->state.seq == 7);
        r.mine({make_contract_tx(tx_kind::cross_check, 2, make_cc(4, 2))});
        CHECK(c->decided_ws()->state.seq == 7);  // lower peer state ignored
    }
    SUBCASE("same sequence, different value: the leader keeps its own") {
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
        std::vector<tx> pubs;
        for (int i = 0; i < 7; ++i)
            pubs.push_back(make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                                         publish_state_body{1, r.pub(r.committee_a[i], 5)}));
        r.mine(std::move(pubs));
        auto* c = r.chain.find_contract(1);
        auto conflicting = r.vc_seq[5];
        conflicting.state.balances[r.alice] = 0;
        conflicting.state.balances[r.bob] = 10;
        conflicting.end_party_sigs = {core::sign_announcement(r.alice, conflicting.state),
                                      core::sign_announcement(r.bob, conflicting.state)};
        cross_check_body cc;
        cc.from = 2;
        cc.to = 1;
        cc.ws = conflicting;
        cc.reg = r.reg;
        r.mine({make_contract_tx(tx_kind::cross_check, 2, cc)});
        CHECK(c->decided_ws()->state == r.vc_seq[5].state);  // leader won the tie
    }
    SUBCASE("cross-check from an unlisted contract is rejected") {
        auto cc = make_cc(7, 9);
        r.mine({make_contract_tx(tx_kind::cross_check, 9, cc)}, false);
        CHECK(r.last.mined.txs[0].status == apply_status::rejected);
    }
}

TEST_CASE("proofs, settlement and payouts") {
    rig r;
    r.fund(7);
    const coins total_before = r.chain.total_coins();
    r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
    auto* c = r.chain.find_contract(1);

    auto publish_mixed = [&](int stale_count) {
        std::vector<tx> pubs;
        for (int i = 0; i < 7; ++i) {
            const bool stale = i < stale_count;
            pubs.push_back(make_actor_tx(
                tx_kind::publish_state, r.committee_a[i],
                publish_state_body{1, r.pub(r.committee_a[i], stale ? 4 : 7)}));
        }
        r.mine(std::move(pubs));
    };
    auto proof_against = [&](int idx, core::seq_no published_seq) {
        core::proof_of_fraud pof;
        pof.accused = r.committee_a[idx];
        pof.published = *r.pub(r.committee_a[idx], published_seq).vc;
        pof.conflicting = core::archived_warden_sig{
            r.vc_seq[7], core::sign_announcement(r.committee_a[idx], r.vc_seq[7].state)};
        return pof;
    };

    SUBCASE("no fraud: settle per the wardens' state; fee to publishers") {
        publish_mixed(0);
        r.mine({make_contract_tx(tx_kind::cross_check, 2,
                                 cross_check_body{2, 1, std::nullopt, r.reg, true})},
               false);  // peer NULL response closes the exchange
        r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice, submit_proofs_body{1, {}})});
        CHECK(c->phase() == contract_phase::pc_closed);
        REQUIRE(c->applied_ws());
        CHECK(c->applied_ws()->state.seq == 7);
        // Payout oracle: locked(4,6) redistributed per seq-7 state (1, 9):
        // Alice 6 + 1, Ingrid 6 + 9; fee 7 to 7 wardens.
        CHECK(r.chain.external_balance(r.alice) == 100 - 10 - 4 + 6 + 1);
        CHECK(r.chain.external_balance(r.ingrid) == 100 - 12 - 3 + 6 + 9);
        coins warden_total = 0;
        for (const auto& w : r.committee_a) warden_total += r.chain.external_balance(w);
        CHECK(warden_total == 10 * 10 + 7);  // collateral back + the whole fee
        CHECK(r.chain.total_coins() == total_before);
    }
    SUBCASE("two stale publications vs newer signatures: +2c to the closer") {
        publish_mixed(2);
        r.mine({make_contract_tx(tx_kind::cross_check, 2,
                                 cross_check_body{2, 1, std::nullopt, r.reg, true})},
               false);
        r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice,
                              submit_proofs_body{1, {proof_against(0, 4),
                                                     proof_against(1, 4)}})});
        // Publications refill to 7 valid only after the other three wardens
        // publish.
        CHECK(c->phase() != contract_phase::pc_closed);
        std::vector<tx> more;
        for (int i = 7; i < 10; ++i)
            more.push_back(make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                                         publish_state_body{1, r.pub(r.committee_a[i], 7)}));
        // The 9th publication completes the pool; anything after the close is
        // rejected on-chain but still a transaction.
        r.mine(std::move(more), false);
        CHECK(c->phase() == contract_phase::pc_closed);
        CHECK(c->valid_proof_count() == 2);
        // +2 collateral on top of the no-fraud payout.
        CHECK(r.chain.external_balance(r.alice) == 100 - 10 - 4 + 6 + 1 + 2 * 4);
        CHECK(r.chain.total_coins() == total_before);
        // Slashed wardens are out their collateral and the fee.
        CHECK(r.chain.external_balance(r.committee_a[0]) == 10 - 4);
    }
    SUBCASE("invalid proofs are ignored, not counted") {
        publish_mixed(0);
        auto bogus = proof_against(0, 7);  // published the latest: no conflict
        r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice,
                              submit_proofs_body{1, {bogus}})});
        CHECK(c->valid_proof_count() == 0);
    }
    SUBCASE("x >= f+1 awards the whole virtual balance to the counterparty") {
        publish_mixed(4);
        std::vector<core::proof_of_fraud> proofs;
        for (int i = 0; i < 4; ++i) proofs.push_back(proof_against(i, 4));
        r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice,
                              submit_proofs_body{1, proofs})});
        // Rule (b) settles immediately; no cross-checking required.
        CHECK(c->phase() == contract_phase::pc_closed);
        CHECK(c->settled_by_fraud_overflow());
        CHECK_FALSE(c->applied_ws());
        // Ingrid receives the whole virtual balance; the closer keeps the
        // slashed collateral; the unpaid fee refunds.
        CHECK(r.chain.external_balance(r.alice) == 100 - 14 + 6 + 0 + 4 * 4 + 2);
        CHECK(r.chain.external_balance(r.ingrid) == 100 - 15 + 6 + 10 + 2);
        CHECK(c->fee_shortfall());
        CHECK(r.chain.total_coins() == total_before);
    }
    SUBCASE("proofs against an already-slashed warden count once") {
        publish_mixed(2);
        r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice,
                              submit_proofs_body{1, {proof_against(0, 4),
                                                     proof_against(0, 4)}})});
        CHECK(c->valid_proof_count() == 1);
    }
}

TEST_CASE("payment channel closes") {
    rig r;
    r.fund();
    const coins total_before = r.chain.total_coins();
    auto* c = r.chain.find_contract(1);

    auto collab_body = [&](const core::update_announcement& m) {
        collab_close_body body;
        body.contract = 1;
        body.final_state = m.state;
        body.party_sigs = m.end_party_sigs;
        return body;
    };
    core::channel_state plain;  // no-lock final state (6, 4) after payments
    plain.id = 1;
    plain.seq = 2;
    plain.balances[r.alice] = 6;
    plain.balances[r.ingrid] = 16;
    core::update_announcement plain_m;
    plain_m.state = plain;
    plain_m.end_party_sigs = {core::sign_announcement(r.alice, plain),
                              core::sign_announcement(r.ingrid, plain)};

    SUBCASE("collaborative close pays out after both parties submit") {
        r.mine({make_actor_tx(tx_kind::collab_close_pc, r.alice, collab_body(plain_m))});
        CHECK(c->phase() != contract_phase::pc_closed);
        r.mine({make_actor_tx(tx_kind::collab_close_pc, r.ingrid, collab_body(plain_m))},
               false);
        CHECK(c->phase() == contract_phase::pc_closed);
        CHECK(r.chain.external_balance(r.alice) == 100 - 10 + 6);
        CHECK(r.chain.external_balance(r.ingrid) == 100 - 12 + 16);
        CHECK(r.chain.total_coins() == total_before);
    }
    SUBCASE("single-signature close is rejected") {
        auto body = collab_body(plain_m);
        body.party_sigs.pop_back();
        r.mine({make_actor_tx(tx_kind::collab_close_pc, r.alice, body)}, false);
        CHECK(r.last.mined.txs[0].status == apply_status::rejected);
        CHECK(c->phase() != contract_phase::pc_closed);
    }
    SUBCASE("pc close attempt with a registered virtual channel forfeits") {
        r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})});
        r.mine({make_actor_tx(tx_kind::collab_close_pc, r.alice, collab_body(plain_m))},
               false);
        CHECK(c->phase() == contract_phase::pc_closed);
        // The whole channel balance goes to the counterparty.
        CHECK(r.chain.external_balance(r.ingrid) == 100 - 12 + 22);
        CHECK(r.chain.external_balance(r.alice) == 100 - 10);
        CHECK(r.chain.total_coins() == total_before);
        REQUIRE(!r.last.settlements.empty());
        CHECK(r.last.settlements[0].penalty);
    }
    SUBCASE("unilateral pc close settles at the highest published state") {
        r.mine({make_actor_tx(tx_kind::close_pc_after_vc, r.alice,
                              close_pc_after_vc_body{1})});
        std::vector<tx> pubs;
        for (int i = 0; i < 7; ++i) {
            publication_entry e;
            e.warden = r.committee_a[i];
            core::signed_state_publication pc_pub;
            pc_pub.warden = e.warden;
            pc_pub.announcement = plain_m;
            pc_pub.warden_sig = core::sign_announcement(e.warden, plain_m.state);
            e.pc = pc_pub;
            pubs.push_back(
                make_actor_tx(tx_kind::publish_state, r.committee_a[i],
                              publish_state_body{1, e}));
        }
        r.mine(std::move(pubs));
        CHECK(c->phase() == contract_phase::pc_closed);
        CHECK(r.chain.external_balance(r.alice) == 100 - 10 + 6);
        CHECK(r.chain.external_balance(r.ingrid) == 100 - 12 + 16);
        CHECK(r.chain.total_coins() == total_before);
    }
}

TEST_CASE("phase machine transitions stay on the rails") {
    rig r;
    r.fund();
    auto* c = r.chain.find_contract(1);
    CHECK(c->phase() == contract_phase::open);
    // Publications before a register are rejected.
    r.mine({make_actor_tx(tx_kind::publish_state, r.committee_a[0],
                          publish_state_body{1, r.pub(r.committee_a[0], 4)})},
           false);
    CHECK(r.last.mined.txs[0].status == apply_status::rejected);
    // Proofs before the closing window are rejected.
    r.mine({make_actor_tx(tx_kind::submit_proofs, r.alice, submit_proofs_body{1, {}})},
           false);
    CHECK(r.last.mined.txs[0].status == apply_status::rejected);
    // Register after a penalty close is rejected.
    core::channel_state s;
    s.id = 1;
    s.seq = 2;
    s.balances[r.alice] = 10;
    s.balances[r.ingrid] = 12;
    core::update_announcement m;
    m.state = s;
    m.end_party_sigs = {core::sign_announcement(r.alice, s),
                        core::sign_announcement(r.ingrid, s)};
    collab_close_body body;
    body.contract = 1;
    body.final_state = s;
    body.party_sigs = m.end_party_sigs;
    r.mine({make_actor_tx(tx_kind::collab_close_pc, r.alice, body)});
    r.mine({make_actor_tx(tx_kind::collab_close_pc, r.ingrid, body)}, false);
    CHECK(c->phase() == contract_phase::pc_closed);
    r.mine({make_actor_tx(tx_kind::register_vc, r.alice, register_vc_body{1, r.reg})}, false);
    CHECK(r.last.mined.txs[0].status == apply_status::rejected);
}
