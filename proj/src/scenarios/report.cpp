#include "vcsim/scenarios/report.hpp"

#include <sstream>

namespace vcsim::scenarios {

tx_phase classify_tx(const chainsim::tx& t) {
    switch (t.kind) {
        case chainsim::tx_kind::deploy_channel:
        case chainsim::tx_kind::fund_party:
        case chainsim::tx_kind::fund_warden:
            return tx_phase::setup;
        case chainsim::tx_kind::register_vc:
        case chainsim::tx_kind::submit_proofs:
            return tx_phase::vc_close;
        case chainsim::tx_kind::publish_state: {
            const auto& body = std::get<chainsim::publish_state_body>(t.body);
            return body.entry.vc ? tx_phase::vc_close : tx_phase::pc_close;
        }
        case chainsim::tx_kind::collab_close_pc:
        case chainsim::tx_kind::close_pc_after_vc:
            return tx_phase::pc_close;
        case chainsim::tx_kind::cross_check:
            return tx_phase::other;  // contract-emitted, not a party or warden tx
    }
    return tx_phase::other;
}

bool check_balance_security(const execution_report& r) {
    if (!r.violations.empty()) return false;
    for (const auto& [who, loss] : r.losses)
        if (r.honest.count(who) && loss > 0) return false;
    return true;
}

bool check_liveness(const execution_report& r) { return r.completed && r.liveness; }

tx_counts count_onchain_txs(const execution_report& r, tx_phase phase) {
    auto it = r.counters.find(phase);
    return it == r.counters.end() ? tx_counts{} : it->second;
}

bool check_same_state_closure(const execution_report& r) {
    const core::update_announcement* first = nullptr;
    for (const auto& oc : r.contracts) {
        if (!oc.applied_ws) continue;
        if (!first) {
            first = &*oc.applied_ws;
            continue;
        }
        if (oc.applied_ws->state.seq != first->state.seq) return false;
        if (!(oc.applied_ws->state.balances == first->state.balances)) return false;
    }
    return true;
}

std::string execution_report::summary() const {
    std::ostringstream os;
    os << scenario << " seed=" << seed << " steps=" << steps << " blocks=" << blocks
       << " completed=" << (completed ? "yes" : "no")
       << " all_closed=" << (all_closed ? "yes" : "no")
       << " liveness=" << (liveness ? "yes" : "no") << "\n";
    for (const auto& oc : contracts) {
        os << "  contract " << oc.id << ": " << chainsim::phase_name(oc.phase);
        if (oc.applied_ws)
            os << " ws_seq=" << oc.applied_ws->state.seq;
        if (oc.penalty) os << " penalty";
        if (oc.fraud_overflow) os << " fraud_overflow";
        os << " pubs=" << oc.publications << " proofs=" << oc.valid_proofs << "\n";
    }
    coins lost = 0;
    for (const auto& [who, l] : losses)
        if (honest.count(who)) lost += l;
    os << "  honest losses total=" << lost;
    if (!violations.empty()) {
        os << " violations:";
        for (const auto& v : violations) os << " [" << v << "]";
    }
    os << "\n";
    return os.str();
}

}  // namespace vcsim::scenarios
