#include "vcsim/chainsim/settlement.hpp"

#include "vcsim/core/quorum.hpp"

#include <algorithm>
#include <set>

namespace vcsim::chainsim {

const char* tx_kind_name(tx_kind k) {
    switch (k) {
        case tx_kind::deploy_channel: return "deploy_channel";
        case tx_kind::fund_party: return "fund_party";
        case tx_kind::fund_warden: return "fund_warden";
        case tx_kind::collab_close_pc: return "collab_close_pc";
        case tx_kind::register_vc: return "register_vc";
        case tx_kind::publish_state: return "publish_state";
        case tx_kind::submit_proofs: return "submit_proofs";
        case tx_kind::cross_check: return "cross_check";
        case tx_kind::close_pc_after_vc: return "close_pc_after_vc";
    }
    return "?";
}

tx make_actor_tx(tx_kind kind, const actor_id& sender, tx_body body) {
    tx t;
    t.kind = kind;
    t.sender.is_contract = false;
    t.sender.actor = sender;
    t.body = std::move(body);
    return t;
}

tx make_contract_tx(tx_kind kind, contract_id sender, tx_body body) {
    tx t;
    t.kind = kind;
    t.sender.is_contract = true;
    t.sender.contract = sender;
    t.body = std::move(body);
    return t;
}

settlement_result evaluate_unilateral_close(const settlement_input& in) {
    settlement_result r;
    std::set<actor_id> fraud(in.proven_fraud.begin(), in.proven_fraud.end());
    r.valid_proofs = fraud.size();
    r.slashed.assign(fraud.begin(), fraud.end());
    r.slash_total = static_cast<coins>(r.slashed.size()) * in.warden_collateral;
    r.fraud_overflow = r.valid_proofs >= static_cast<std::size_t>(in.f) + 1;

    const std::size_t threshold = core::quorum_threshold(in.f);

    // First 2f+1 non-fraudulent publications, one per warden, arrival order.
    std::vector<const publication_entry*> pool;
    std::set<actor_id> seen;
    for (const auto& e : in.publications) {
        if (seen.count(e.warden)) continue;
        seen.insert(e.warden);
        if (fraud.count(e.warden)) continue;
        pool.push_back(&e);
        if (pool.size() == threshold) break;
    }
    r.decided = pool.size() >= threshold;

    for (const auto* e : pool) {
        if (e->vc && (!r.ws || e->vc->announcement.state.seq > r.ws->state.seq))
            r.ws = e->vc->announcement;
        if (e->pc && (!r.pc_state || e->pc->announcement.state.seq > r.pc_state->state.seq))
            r.pc_state = e->pc->announcement;
    }

    if (in.fee_pot > 0 && threshold > 0) {
        const coins share = in.fee_pot / static_cast<coins>(threshold);
        for (const auto* e : pool) {
            r.fee_payments[e->warden] = share;
            r.fee_paid_total += share;
        }
    }
    r.fee_shortfall = pool.size() < threshold;
    return r;
}

vc_split split_lock(const core::lock_entry& lock, const core::update_announcement& ws,
                    const actor_id& left_end, const actor_id& left_party) {
    (void)left_party;
    const coins total = lock.total();
    coins left_share = 0;
    if (auto it = ws.state.balances.find(left_end); it != ws.state.balances.end())
        left_share = it->second;
    left_share = std::clamp<coins>(left_share, 0, total);
    return vc_split{left_share, total - left_share};
}

}  // namespace vcsim::chainsim
