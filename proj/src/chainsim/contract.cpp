#include "vcsim/chainsim/contract.hpp"

#include "vcsim/core/crypto.hpp"
#include "vcsim/core/quorum.hpp"

#include <algorithm>

namespace vcsim::chainsim {

const char* phase_name(contract_phase p) {
    switch (p) {
        case contract_phase::open: return "open";
        case contract_phase::vc_registered: return "vc_registered";
        case contract_phase::vc_collecting: return "vc_collecting";
        case contract_phase::vc_crosschecking: return "vc_crosschecking";
        case contract_phase::vc_closed: return "vc_closed";
        case contract_phase::pc_closed: return "pc_closed";
    }
    return "?";
}

namespace {
contract_effects reject(const std::string& why) {
    contract_effects fx;
    fx.status = apply_status::rejected;
    fx.detail = why;
    return fx;
}
}  // namespace

contract::contract(const deploy_channel_body& cfg)
    : id_(cfg.contract),
      pc_channel_(cfg.pc_channel),
      parties_(cfg.parties),
      deposit_plan_(cfg.deposits),
      fee_plan_(cfg.fee_contributions),
      f_(cfg.f),
      collateral_per_warden_(cfg.collateral_per_warden) {
    for (const auto& w : cfg.committee) wardens_.push_back(warden_slot{w, 0, false, false});
    funding_state_.id = pc_channel_;
    funding_state_.seq = 1;
    for (const auto& [p, d] : deposit_plan_) funding_state_.balances[p] = d;
}

bool contract::fully_funded() const {
    for (const auto& [p, d] : deposit_plan_) {
        auto it = deposits_held_.find(p);
        if (it == deposits_held_.end() || it->second < d) return false;
    }
    for (const auto& w : wardens_)
        if (!w.funded) return false;
    return true;
}

bool contract::is_leader() const {
    return register_ && register_->contracts.leader == id_;
}

bool contract::is_party(const actor_id& a) const {
    return std::find(parties_.begin(), parties_.end(), a) != parties_.end();
}

bool contract::is_committee_member(const actor_id& a) const {
    for (const auto& w : wardens_)
        if (w.id == a) return true;
    return false;
}

actor_id contract::counterparty_of(const actor_id& a) const {
    for (const auto& p : parties_)
        if (!(p == a)) return p;
    return a;
}

std::size_t contract::valid_publication_count() const {
    std::size_t n = 0;
    std::set<actor_id> seen;
    for (const auto& e : publications_) {
        if (seen.count(e.warden)) continue;
        seen.insert(e.warden);
        if (!proven_fraud_.count(e.warden)) ++n;
    }
    return n;
}

coins contract::expected_party_funding(const actor_id& who) const {
    coins amount = 0;
    if (auto d = deposit_plan_.find(who); d != deposit_plan_.end()) amount += d->second;
    if (auto f = fee_plan_.find(who); f != fee_plan_.end()) amount += f->second;
    return amount;
}

contract_effects contract::fund_party(const actor_id& who, coins amount) {
    if (phase_ != contract_phase::open) return reject("funding after open phase");
    if (!is_party(who)) return reject("funder is not a channel party");
    auto plan = deposit_plan_.find(who);
    coins fee = 0;
    if (auto fp = fee_plan_.find(who); fp != fee_plan_.end()) fee = fp->second;
    if (plan == deposit_plan_.end() || amount != plan->second + fee)
        return reject("deposit does not match the funding plan");
    if (deposits_held_.count(who)) return reject("party already funded");
    deposits_held_[who] = plan->second;
    fee_held_[who] = fee;
    escrow_ += amount;
    contract_effects fx;
    fx.detail = "party funded";
    return fx;
}

contract_effects contract::fund_warden(const actor_id& who, coins amount) {
    if (phase_ != contract_phase::open) return reject("funding after open phase");
    for (auto& w : wardens_) {
        if (w.id == who) {
            if (w.funded) return reject("warden already funded");
            if (amount != collateral_per_warden_) return reject("wrong collateral amount");
            w.funded = true;
            w.collateral = amount;
            escrow_ += amount;
            contract_effects fx;
            fx.detail = "warden funded";
            return fx;
        }
    }
    return reject("funder is not a committee member");
}

contract_effects contract::handle_register(const core::register_tx& reg, bool auto_registered) {
    if (phase_ == contract_phase::vc_closed || phase_ == contract_phase::pc_closed)
        return reject("register after close");
    if (register_) {
        if (core::digest_of(*register_) == core::digest_of(reg)) {
            contract_effects fx;
            fx.status = apply_status::ignored;
            fx.detail = "duplicate register";
            return fx;
        }
        return reject("conflicting register");
    }
    if (!core::register_tx_valid(reg)) return reject("invalid register signatures");
    const auto& listed = reg.contracts.contracts;
    if (std::find(listed.begin(), listed.end(), id_) == listed.end())
        return reject("register does not name this contract");
    register_ = reg;
    for (contract_id c : listed)
        if (c != id_) peers_.push_back(c);
    phase_ = contract_phase::vc_registered;
    contract_effects fx;
    fx.detail = auto_registered ? "registered via cross-check" : "registered";
    return fx;
}

bool contract::validate_pc_component(const core::signed_state_publication& p) const {
    if (!core::verify_announcement_sig(p.warden_sig, p.warden, p.announcement.state))
        return false;
    const auto& st = p.announcement.state;
    if (st.id != pc_channel_) return false;
    if (st.balance_total() + st.locked_total() != funding_state_.balance_total()) return false;
    const auto bytes = core::announcement_signing_bytes(st);
    for (const auto& party : parties_) {
        bool ok = false;
        for (const auto& s : p.announcement.end_party_sigs)
            if (core::verify(s, party, bytes)) ok = true;
        if (!ok) return false;
    }
    return true;
}

bool contract::validate_vc_component(const core::signed_state_publication& p) const {
    if (!register_) return false;
    if (!core::verify_announcement_sig(p.warden_sig, p.warden, p.announcement.state))
        return false;
    const auto& st = p.announcement.state;
    if (st.id != register_->initial_state.id) return false;
    if (st.balance_total() != register_->balance) return false;
    const actor_id& end_a = register_->parties.front();
    const actor_id& end_b = register_->parties.back();
    return core::announcement_valid(p.announcement, end_a, end_b);
}

contract_effects contract::handle_publication(const publication_entry& entry) {
    const bool vc_window = phase_ == contract_phase::vc_registered ||
                           phase_ == contract_phase::vc_collecting ||
                           phase_ == contract_phase::vc_crosschecking;
    const bool pc_window = !register_ && pc_close_requested_ && phase_ == contract_phase::open;
    if (!vc_window && !pc_window) return reject("publication outside closing window");
    if (!is_committee_member(entry.warden)) return reject("publisher not in committee");
    if (publishers_.count(entry.warden)) return reject("second publication by same warden");
    if (entry.vc) {
        if (!(entry.vc->warden == entry.warden)) return reject("publication warden mismatch");
        if (!validate_vc_component(*entry.vc))
            return reject("invalid published virtual state");
    }
    if (entry.pc) {
        if (!(entry.pc->warden == entry.warden)) return reject("publication warden mismatch");
        if (!validate_pc_component(*entry.pc))
            return reject("invalid published channel state");
    }
    publishers_.insert(entry.warden);
    publications_.push_back(entry);
    if (phase_ == contract_phase::vc_registered) phase_ = contract_phase::vc_collecting;

    contract_effects fx;
    fx.detail = "publication stored";
    if (pc_window) {
        if (valid_publication_count() >= core::quorum_threshold(f_)) settle_pc_only(fx);
        return fx;
    }
    maybe_decide_own(fx);
    maybe_settle(fx);
    return fx;
}

// Unilateral close of a payment channel that has no virtual channel pending:
// one close request, then the committee's published states decide the final
// channel state.
void contract::settle_pc_only(contract_effects& fx) {
    auto eval = evaluate_unilateral_close(make_settlement_input());
    core::channel_state pc = settled_pc_state();
    std::map<actor_id, coins> out;
    for (const auto& [p, b] : pc.balances) out[p] += b;
    for (const auto& l : pc.locks)
        for (const auto& [p, amt] : l.amounts) out[p] += amt;
    for (const auto& [p, amt] : out) pay(fx, p, amt, "channel payout");

    coins fee_paid = 0;
    for (const auto& [w, amt] : eval.fee_payments) {
        pay(fx, w, amt, "closing fee share");
        fee_paid += amt;
    }
    refund_fee_remainder(fx, fee_paid);
    for (auto& w : wardens_) {
        if (w.collateral > 0) {
            pay(fx, w.id, w.collateral, "collateral returned");
            w.collateral = 0;
        }
    }
    phase_ = contract_phase::pc_closed;
    fx.closed_pc = true;
    fx.detail = "unilateral pc close settled";
}

// Decide the candidate wardens' state once 2f+1 valid publications are in.
// Later proofs can invalidate pool members; the recomputed candidate only
// ever replaces the decided one with a higher sequence number.
void contract::maybe_decide_own(contract_effects& fx) {
    if (ws_source_ == ws_origin::adopted) return;
    if (valid_publication_count() < core::quorum_threshold(f_)) return;
    auto eval = evaluate_unilateral_close(make_settlement_input());
    if (!eval.ws) return;
    if (!ws_final_ || eval.ws->state.seq > ws_final_->state.seq) {
        ws_final_ = eval.ws;
        ws_source_ = ws_origin::own;
        ++ws_version_;
        if (phase_ == contract_phase::vc_collecting) phase_ = contract_phase::vc_crosschecking;
        emit_pending(fx);
    } else if (phase_ == contract_phase::vc_collecting) {
        phase_ = contract_phase::vc_crosschecking;
        emit_pending(fx);
    }
}

// Send the current wardens' state to every peer that has not seen this
// version yet.
void contract::emit_pending(contract_effects& fx) {
    if (disable_crosscheck_ || !register_ || !ws_final_) return;
    for (contract_id p : peers_) {
        auto it = sent_version_.find(p);
        const std::uint64_t sent = it == sent_version_.end() ? 0 : it->second;
        if (sent >= ws_version_) continue;
        sent_version_[p] = ws_version_;
        cross_check_body body;
        body.from = id_;
        body.to = p;
        body.ws = ws_final_;
        body.reg = *register_;
        fx.emissions.push_back(std::move(body));
    }
}

void contract::bump_ws(const core::update_announcement& ws, ws_origin origin,
                       contract_effects& fx, contract_id already_current_peer,
                       bool has_already_current_peer) {
    ws_final_ = ws;
    if (ws_source_ == ws_origin::none) ws_source_ = origin;
    ++ws_version_;
    if (has_already_current_peer) sent_version_[already_current_peer] = ws_version_;
    emit_pending(fx);
}

contract_effects contract::handle_crosscheck(const cross_check_body& body) {
    if (disable_crosscheck_) return reject("cross-checking disabled");
    if (body.to != id_) return reject("cross-check addressed elsewhere");
    contract_effects fx;
    if (phase_ == contract_phase::vc_closed || phase_ == contract_phase::pc_closed) {
        // Settled contracts still answer queries so late closers converge on
        // the same state; their own state is frozen.
        if (register_ &&
            std::find(peers_.begin(), peers_.end(), body.from) == peers_.end())
            return reject("cross-check from unknown contract");
        if (!body.is_reply && register_ && ws_final_) {
            cross_check_body reply;
            reply.from = id_;
            reply.to = body.from;
            reply.ws = ws_final_;
            reply.reg = *register_;
            reply.is_reply = true;
            fx.emissions.push_back(std::move(reply));
        }
        fx.detail = "answered from settled state";
        return fx;
    }
    if (!register_) {
        // A peer can start closing before anyone registered here; the carried
        // register proves the virtual channel and brings this contract in.
        auto reg_fx = handle_register(body.reg, true);
        if (reg_fx.status == apply_status::rejected)
            return reject("cross-check with invalid register: " + reg_fx.detail);
    }
    if (std::find(peers_.begin(), peers_.end(), body.from) == peers_.end())
        return reject("cross-check from unknown contract");
    responded_peers_.insert(body.from);

    if (!body.ws) {
        fx.detail = "null reply";
        maybe_settle(fx);
        return fx;
    }
    const auto& peer_ws = *body.ws;

    if (!ws_final_) {
        // Not decided yet: store the peer's state and reply NULL. Later own
        // publications no longer override it.
        ws_final_ = peer_ws;
        ws_source_ = ws_origin::adopted;
        ++ws_version_;
        sent_version_[body.from] = ws_version_;
        cross_check_body reply;
        reply.from = id_;
        reply.to = body.from;
        reply.ws = std::nullopt;
        reply.reg = *register_;
        reply.is_reply = true;
        fx.emissions.push_back(std::move(reply));
        fx.detail = "adopted peer state";
        emit_pending(fx);  // other peers, if any
        maybe_settle(fx);
        return fx;
    }

    if (peer_ws.state.seq > ws_final_->state.seq) {
        bump_ws(peer_ws, ws_source_, fx, body.from, true);
        fx.detail = "adopted higher-sequence peer state";
    } else if (peer_ws.state.seq < ws_final_->state.seq) {
        fx.detail = "kept higher own state";
        emit_pending(fx);
    } else if (peer_ws.state == ws_final_->state) {
        fx.detail = "states agree";
    } else {
        // Same sequence, different value: the leader contract's state wins.
        const contract_id leader = register_->contracts.leader;
        if (leader == id_) {
            fx.detail = "tie kept: this contract leads";
            emit_pending(fx);
        } else if (leader == body.from) {
            bump_ws(peer_ws, ws_source_, fx, body.from, true);
            fx.detail = "tie resolved to leader state";
        } else {
            fx.detail = "tie deferred to leader";
        }
    }
    maybe_settle(fx);
    return fx;
}

contract_effects contract::handle_proofs(const actor_id& submitter,
                                         const std::vector<core::proof_of_fraud>& proofs) {
    if (phase_ != contract_phase::vc_crosschecking && phase_ != contract_phase::vc_collecting)
        return reject("proofs outside closing window");
    if (!is_party(submitter)) return reject("proof submitter is not a channel party");

    contract_effects fx;
    std::size_t fresh = 0;
    for (const auto& p : proofs) {
        if (!core::validate_proof_of_fraud(p)) continue;  // invalid: ignored, not counted
        if (!is_committee_member(p.accused)) continue;
        if (register_ && p.published.announcement.state.id != register_->initial_state.id &&
            p.published.announcement.state.id != pc_channel_)
            continue;
        if (proven_fraud_.count(p.accused)) continue;  // counted once
        proven_fraud_.insert(p.accused);
        ++fresh;
        for (auto& w : wardens_) {
            if (w.id == p.accused && !w.slashed) {
                w.slashed = true;
                pay(fx, submitter, w.collateral, "slashed collateral");
                w.collateral = 0;
            }
        }
    }
    const bool first_submission = !proofs_submitted_;
    proofs_submitted_ = true;
    if (first_submission) proof_submitter_ = submitter;
    fx.detail = "proofs: " + std::to_string(fresh) + " new, x=" +
                std::to_string(proven_fraud_.size());

    if (proven_fraud_.size() >= static_cast<std::size_t>(f_) + 1) {
        // Rule (b): too many cheaters to trust the published state at all.
        settled_by_fraud_overflow_ = true;
        settle_vc_and_close(fx);
        return fx;
    }
    // Exclusions may have dropped the valid pool below 2f+1; reopen collection.
    if (valid_publication_count() < core::quorum_threshold(f_) &&
        phase_ == contract_phase::vc_crosschecking && ws_source_ != ws_origin::adopted)
        phase_ = contract_phase::vc_collecting;
    maybe_decide_own(fx);
    maybe_settle(fx);
    return fx;
}

settlement_input contract::make_settlement_input() const {
    settlement_input in;
    in.f = f_;
    in.warden_collateral = collateral_per_warden_;
    coins fee_pot = 0;
    for (const auto& [_, v] : fee_held_) fee_pot += v;
    in.fee_pot = fee_pot;
    in.publications = publications_;
    in.proven_fraud.assign(proven_fraud_.begin(), proven_fraud_.end());
    return in;
}

void contract::maybe_settle(contract_effects& fx) {
    if (phase_ != contract_phase::vc_crosschecking && phase_ != contract_phase::vc_collecting)
        return;
    if (!proofs_submitted_ || !ws_final_) return;
    if (valid_publication_count() < core::quorum_threshold(f_)) return;
    if (!disable_crosscheck_) {
        for (contract_id p : peers_)
            if (!responded_peers_.count(p)) {
                emit_pending(fx);
                return;  // cross-check not resolved yet
            }
    }
    settle_vc_and_close(fx);
}

core::channel_state contract::settled_pc_state() const {
    core::channel_state best = funding_state_;
    std::set<actor_id> seen;
    std::size_t taken = 0;
    for (const auto& e : publications_) {
        if (seen.count(e.warden)) continue;
        seen.insert(e.warden);
        if (proven_fraud_.count(e.warden)) continue;
        if (++taken > core::quorum_threshold(f_)) break;
        if (e.pc && e.pc->announcement.state.seq > best.seq) best = e.pc->announcement.state;
    }
    return best;
}

void contract::pay(contract_effects& fx, const actor_id& to, coins amount,
                   const std::string& reason) {
    if (amount == 0) return;
    escrow_ -= amount;
    fx.payouts.push_back(payout{to, amount, reason});
}

// Unspent fee escrow returns to the contributors; the last one absorbs the
// integer-division remainder.
void contract::refund_fee_remainder(contract_effects& fx, coins fee_paid) {
    coins fee_pool = 0;
    for (auto& [p, v] : fee_held_) {
        fee_pool += v;
        v = 0;
    }
    const coins fee_rest = fee_pool - fee_paid;
    if (fee_rest <= 0) return;
    std::vector<actor_id> contributors;
    for (const auto& [p, planned] : fee_plan_)
        if (planned > 0) contributors.push_back(p);
    if (contributors.empty()) contributors = parties_;
    const coins each = fee_rest / static_cast<coins>(contributors.size());
    coins acc = 0;
    for (std::size_t i = 0; i < contributors.size(); ++i) {
        const coins amt = (i + 1 == contributors.size()) ? fee_rest - acc : each;
        acc += amt;
        pay(fx, contributors[i], amt, "fee refund");
    }
}

void contract::return_collateral_and_fee(contract_effects& fx) {
    for (auto& w : wardens_) {
        if (w.collateral > 0) {
            pay(fx, w.id, w.collateral, "collateral returned");
            w.collateral = 0;
        }
    }
    for (auto& [p, v] : fee_held_) {
        if (v > 0) {
            pay(fx, p, v, "fee refund");
            v = 0;
        }
    }
}

// Protocol 4 tail: settle the virtual part into the payment channel state,
// punish, distribute the closing fee, then close the payment channel itself.
void contract::settle_vc_and_close(contract_effects& fx) {
    auto eval = evaluate_unilateral_close(make_settlement_input());

    core::channel_state pc = settled_pc_state();
    std::map<actor_id, coins> out;
    for (const auto& [p, b] : pc.balances) out[p] += b;

    const core::channel_id vc_id = register_ ? register_->initial_state.id : 0;
    for (const auto& l : pc.locks) {
        if (register_ && l.vc_id == vc_id && ws_final_ && !settled_by_fraud_overflow_) {
            // Left lock party is the one nearer the first register party.
            const actor_id& left_end = register_->parties.front();
            actor_id left_party = parties_[0];
            for (const auto& p : register_->parties) {
                if (std::find(parties_.begin(), parties_.end(), p) != parties_.end()) {
                    left_party = p;
                    break;
                }
            }
            auto split = split_lock(l, *ws_final_, left_end, left_party);
            out[left_party] += split.left;
            out[counterparty_of(left_party)] += split.right;
        } else if (register_ && l.vc_id == vc_id && settled_by_fraud_overflow_) {
            // Rule (b): the whole virtual balance goes to the counterparty of
            // the party who submitted the proofs.
            out[counterparty_of(proof_submitter_)] += l.total();
        } else {
            // Unrelated or unresolved lock: contributions return.
            for (const auto& [p, amt] : l.amounts) out[p] += amt;
        }
    }

    for (const auto& [p, amt] : out) pay(fx, p, amt, "channel payout");

    // First 2f+1 publishers with no proven cheating split the closing fee.
    coins fee_paid = 0;
    for (const auto& [w, amt] : eval.fee_payments) {
        pay(fx, w, amt, "closing fee share");
        fee_paid += amt;
    }
    refund_fee_remainder(fx, fee_paid);
    fee_shortfall_ = eval.fee_shortfall;

    // Remaining (unslashed) collateral returns to the wardens.
    for (auto& w : wardens_) {
        if (w.collateral > 0) {
            pay(fx, w.id, w.collateral, "collateral returned");
            w.collateral = 0;
        }
    }

    applied_ws_ = settled_by_fraud_overflow_ ? std::nullopt : ws_final_;
    phase_ = contract_phase::vc_closed;
    fx.settled_vc = true;
    phase_ = contract_phase::pc_closed;
    fx.closed_pc = true;
    fx.detail += fx.detail.empty() ? "settled" : "; settled";
}

void contract::close_penalty(const actor_id& offender, contract_effects& fx) {
    // Closing the payment channel with the virtual channel still pending
    // forfeits the whole channel balance to the counterparty.
    coins total = 0;
    for (const auto& [p, d] : deposits_held_) total += d;
    pay(fx, counterparty_of(offender), total, "skip penalty");
    return_collateral_and_fee(fx);
    phase_ = contract_phase::pc_closed;
    fx.closed_pc = true;
    fx.penalty = true;
    fx.detail = "penalty: pc close before vc settled";
}

contract_effects contract::handle_collab_close(const actor_id& submitter,
                                               const collab_close_body& body) {
    if (phase_ == contract_phase::pc_closed) return reject("channel already closed");
    if (!is_party(submitter)) return reject("close by non-party");
    if (register_ && phase_ != contract_phase::vc_closed) {
        contract_effects fx;
        close_penalty(submitter, fx);
        return fx;
    }
    if (body.party_sigs.size() != 2) return reject("close requires both signatures");
    const auto bytes = core::announcement_signing_bytes(body.final_state);
    for (const auto& p : parties_) {
        bool ok = false;
        for (const auto& s : body.party_sigs)
            if (core::verify(s, p, bytes)) ok = true;
        if (!ok) return reject("missing party signature on close state");
    }
    if (body.final_state.balance_total() + body.final_state.locked_total() !=
        funding_state_.balance_total())
        return reject("close state does not conserve the channel balance");

    if (!pending_collab_) {
        pending_collab_ = pending_collab{body.final_state, body.party_sigs, {submitter}};
        contract_effects fx;
        fx.detail = "close half-armed";
        return fx;
    }
    if (!(pending_collab_->state == body.final_state)) return reject("conflicting close states");
    pending_collab_->submitters.insert(submitter);
    if (pending_collab_->submitters.size() < parties_.size()) {
        contract_effects fx;
        fx.status = apply_status::ignored;
        fx.detail = "close already armed by this party";
        return fx;
    }

    contract_effects fx;
    std::map<actor_id, coins> out;
    for (const auto& [p, b] : pending_collab_->state.balances) out[p] += b;
    for (const auto& l : pending_collab_->state.locks)
        for (const auto& [p, amt] : l.amounts) out[p] += amt;
    for (const auto& [p, amt] : out) pay(fx, p, amt, "collaborative close payout");
    return_collateral_and_fee(fx);
    phase_ = contract_phase::pc_closed;
    fx.closed_pc = true;
    fx.detail = "collaborative close";
    return fx;
}

contract_effects contract::handle_pc_close_request(const actor_id& submitter) {
    if (phase_ == contract_phase::pc_closed) return reject("channel already closed");
    if (!is_party(submitter)) return reject("close by non-party");
    if (register_ && phase_ != contract_phase::vc_closed) {
        contract_effects fx;
        close_penalty(submitter, fx);
        return fx;
    }
    if (pc_close_requested_) {
        contract_effects fx;
        fx.status = apply_status::ignored;
        fx.detail = "pc close already requested";
        return fx;
    }
    pc_close_requested_ = true;
    contract_effects fx;
    fx.detail = "pc close requested; awaiting publications";
    return fx;
}

}  // namespace vcsim::chainsim
