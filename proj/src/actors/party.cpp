#include "vcsim/actors/party.hpp"

#include "vcsim/core/crypto.hpp"
#include "vcsim/core/quorum.hpp"

#include <algorithm>

namespace vcsim::actors {

namespace {
proto::note make_note(proto::note_kind k, core::channel_id ch, core::seq_no seq, bool ok) {
    return proto::note{k, ch, seq, ok};
}
}  // namespace

void party::add_pc_channel(core::channel_id ch, chainsim::contract_id contract, actor_id peer,
                           std::vector<actor_id> committee, std::uint32_t f,
                           const core::update_announcement& funding, coins fee_contribution) {
    pc_view pc;
    pc.id = ch;
    pc.contract = contract;
    pc.peer = std::move(peer);
    pc.committee = std::move(committee);
    pc.f = f;
    pc.committed = funding;
    pc.fee_contribution = fee_contribution;
    pcs_[ch] = std::move(pc);
}

void party::set_vc_plan(vc_plan plan) {
    vc_view v;
    v.plan = std::move(plan);
    core::update_announcement m1;
    m1.state = v.plan.initial_state;
    v.committed = m1;  // balances of s_1; signatures attach during open
    vc_ = std::move(v);
}

party::pc_view* party::pc_by_channel(core::channel_id ch) {
    auto it = pcs_.find(ch);
    return it == pcs_.end() ? nullptr : &it->second;
}

party::pc_view* party::pc_with_peer(const actor_id& peer) {
    for (auto& [_, pc] : pcs_)
        if (pc.peer == peer) return &pc;
    return nullptr;
}

bool party::is_vc_end() const {
    if (!vc_) return false;
    return cfg_.id == vc_->plan.parties.front() || cfg_.id == vc_->plan.parties.back();
}

actor_id party::other_end() const {
    return cfg_.id == vc_->plan.parties.front() ? vc_->plan.parties.back()
                                                : vc_->plan.parties.front();
}

std::vector<actor_id> party::my_vc_neighbors() const {
    std::vector<actor_id> out;
    const auto& ps = vc_->plan.parties;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] == cfg_.id) {
            if (i > 0) out.push_back(ps[i - 1]);
            if (i + 1 < ps.size()) out.push_back(ps[i + 1]);
        }
    }
    return out;
}

party::entitlement_view party::entitlement() const {
    entitlement_view ev;
    for (const auto& [_, pc] : pcs_) {
        ev.fee_contributions += pc.fee_contribution;
        ev.pc_states.push_back(pc.committed);
    }
    if (vc_ && vc_->highest_both_signed) ev.vc_entitlement = vc_->highest_both_signed;
    ev.vc_open = vc_ && vc_->open;
    return ev;
}

void party::archive_sig(const core::archived_warden_sig& sig) {
    archive_[sig.announcement.state.id][sig.warden_sig.signer][sig.announcement.state.seq]
        .push_back(sig);
}

void party::on_message(const netsim::envelope& env, netsim::context& ctx) {
    // Control messages still flip switches; everything else is dead air when
    // offline.
    if (const auto* c = std::get_if<proto::control>(&env.payload)) {
        if (c->kind == proto::ctl_kind::go_offline || c->kind == proto::ctl_kind::crash) {
            offline_ = true;
            return;
        }
        if (c->kind == proto::ctl_kind::go_online) {
            offline_ = false;
            return;
        }
        if (silent()) return;
        return handle_control(*c, ctx);
    }
    if (silent()) return;

    const actor_id from = env.from.kind == netsim::endpoint_kind::actor ? env.from.id
                                                                        : actor_id{};
    if (const auto* m = std::get_if<proto::pre_register>(&env.payload))
        return on_pre_register(*m, from, ctx);
    if (const auto* m = std::get_if<proto::pre_register_reply>(&env.payload))
        return on_pre_register_reply(*m, ctx);
    if (const auto* m = std::get_if<proto::register_share>(&env.payload))
        return on_register_share(*m, from, ctx);
    if (const auto* m = std::get_if<proto::open_ack>(&env.payload)) return on_open_ack(*m, ctx);
    if (const auto* m = std::get_if<proto::state_propose>(&env.payload))
        return on_state_propose(*m, from, ctx);
    if (const auto* m = std::get_if<proto::state_accept>(&env.payload))
        return on_state_accept(*m, ctx);
    if (const auto* m = std::get_if<proto::state_refuse>(&env.payload))
        return on_state_refuse(*m, ctx);
    if (const auto* m = std::get_if<proto::update_sig>(&env.payload))
        return on_update_sig(*m, ctx);
    if (const auto* m = std::get_if<proto::close_request>(&env.payload))
        return on_close_request(*m, from, ctx);
    if (const auto* m = std::get_if<proto::close_agree>(&env.payload))
        return on_close_agree(*m, from, ctx);
    if (const auto* m = std::get_if<proto::close_reject>(&env.payload))
        return on_close_reject(*m, from, ctx);
    if (const auto* m = std::get_if<proto::block_notify>(&env.payload))
        return handle_block(*m, ctx);
}

void party::handle_control(const proto::control& c, netsim::context& ctx) {
    switch (c.kind) {
        case proto::ctl_kind::fund: {
            // Stage 1 publishes the channel contracts (deployer deposits ride
            // along); stage 2 adds the counterparty deposits once the
            // contracts exist on-chain.
            if (c.amount <= 1) {
                for (const auto& d : deploys_)
                    ctx.send(netsim::blockchain_ep(),
                             proto::chain_tx{chainsim::make_actor_tx(
                                 chainsim::tx_kind::deploy_channel, cfg_.id, d)});
                return;
            }
            std::set<chainsim::contract_id> deployed;
            for (const auto& d : deploys_) deployed.insert(d.contract);
            for (auto& [_, pc] : pcs_) {
                if (deployed.count(pc.contract)) continue;
                chainsim::fund_party_body body{pc.contract};
                ctx.send(netsim::blockchain_ep(),
                         proto::chain_tx{chainsim::make_actor_tx(chainsim::tx_kind::fund_party,
                                                                 cfg_.id, body)});
            }
            ctx.send(netsim::driver_ep(), make_note(proto::note_kind::funded, 0, 0, true));
            return;
        }
        case proto::ctl_kind::open_vc:
            return start_open(ctx);
        case proto::ctl_kind::do_update: {
            if (c.channel == 0) return start_vc_update(c.amount, c.update_kind, ctx);
            // Plain payment on an underlying channel.
            pc_view* pc = pc_by_channel(c.channel);
            if (!pc || pc->pending) return;
            core::channel_state next = pc->committed.state;
            next.seq += 1;
            next.balances[cfg_.id] -= c.amount;
            next.balances[pc->peer] += c.amount;
            propose_pc_update(*pc, std::move(next), proto::update_purpose::payment, ctx);
            return;
        }
        case proto::ctl_kind::start_close:
            return start_close(static_cast<close_mode>(c.close_mode), ctx);
        case proto::ctl_kind::patience_expired:
            return on_patience_expired(ctx);
        case proto::ctl_kind::close_pc:
            return start_pc_close(c.channel, false, ctx);
        case proto::ctl_kind::close_pc_force:
            return start_pc_close(c.channel, true, ctx);
        default:
            return;
    }
}

// ---------------------------------------------------------------- open ----

void party::start_open(netsim::context& ctx) {
    if (!vc_ || !is_vc_end()) return;
    core::register_tx draft;
    draft.parties = vc_->plan.parties;
    draft.committees = vc_->plan.committees;
    for (const auto& committee : vc_->plan.committees)
        for (const auto& w : committee)
            if (std::find(draft.committee_union.begin(), draft.committee_union.end(), w) ==
                draft.committee_union.end())
                draft.committee_union.push_back(w);
    draft.initial_state = vc_->plan.initial_state;
    draft.balance = vc_->plan.balance;
    draft.contracts = vc_->plan.contracts;
    const auto bytes = core::register_signing_bytes(draft);
    draft.party_sigs = {core::sign(cfg_.id, bytes)};

    for (std::size_t i = 1; i + 1 < vc_->plan.parties.size(); ++i)
        ctx.send(netsim::actor_ep(vc_->plan.parties[i]), proto::pre_register{draft});
}

void party::on_pre_register(const proto::pre_register& m, const actor_id& from,
                            netsim::context& ctx) {
    if (!vc_ || is_vc_end()) return;
    vc_->preregisters[from] = m.draft;
    if (vc_->preregisters.size() < 2) return;

    // Both ends sent their pre-register; Ingrid verifies they match before
    // signing. A mismatch aborts: no register exists for anyone.
    auto it = vc_->preregisters.begin();
    const auto a = core::register_signing_bytes(it->second);
    const auto b = core::register_signing_bytes(std::next(it)->second);
    if (a != b) {
        open_failed_ = true;
        ctx.log("pre-register mismatch; open aborted");
        ctx.send(netsim::driver_ep(), make_note(proto::note_kind::open_failed, vc_->plan.vc, 0,
                                                false));
        return;
    }
    core::register_tx reply = it->second;
    reply.party_sigs.push_back(core::sign(cfg_.id, a));
    const actor_id ends[2] = {vc_->plan.parties.front(), vc_->plan.parties.back()};
    for (const auto& e : ends)
        ctx.send(netsim::actor_ep(e), proto::pre_register_reply{reply, cfg_.id});
}

void party::on_pre_register_reply(const proto::pre_register_reply& m, netsim::context& ctx) {
    if (!vc_ || !is_vc_end()) return;
    const auto bytes = core::register_signing_bytes(m.draft);
    for (const auto& s : m.draft.party_sigs)
        if (core::verify(s, m.intermediary, bytes)) vc_->intermediary_sigs[m.intermediary] = s;

    // Pass the intermediary response to the other end, along with our own
    // signature over the initial state for the wardens' baseline.
    proto::register_share share;
    share.draft = m.draft;
    share.s1_sig = core::sign_announcement(cfg_.id, vc_->plan.initial_state);
    ctx.send(netsim::actor_ep(other_end()), share);
    maybe_assemble_register(ctx);
}

void party::on_register_share(const proto::register_share& m, const actor_id& from,
                              netsim::context& ctx) {
    if (!vc_ || !is_vc_end()) return;
    const auto bytes = core::register_signing_bytes(m.draft);
    for (const auto& s : m.draft.party_sigs) {
        if (core::verify(s, from, bytes)) vc_->other_end_sig = s;
        for (std::size_t i = 1; i + 1 < vc_->plan.parties.size(); ++i)
            if (core::verify(s, vc_->plan.parties[i], bytes))
                vc_->intermediary_sigs[vc_->plan.parties[i]] = s;
    }
    if (core::verify_announcement_sig(m.s1_sig, from, vc_->plan.initial_state))
        vc_->other_end_s1_sig = m.s1_sig;
    maybe_assemble_register(ctx);
}

void party::maybe_assemble_register(netsim::context& ctx) {
    if (vc_->tx_r) return;
    const std::size_t needed_intermediaries = vc_->plan.parties.size() - 2;
    if (vc_->intermediary_sigs.size() < needed_intermediaries) return;
    if (!vc_->other_end_sig || !vc_->other_end_s1_sig) return;

    core::register_tx full;
    full.parties = vc_->plan.parties;
    full.committees = vc_->plan.committees;
    for (const auto& committee : vc_->plan.committees)
        for (const auto& w : committee)
            if (std::find(full.committee_union.begin(), full.committee_union.end(), w) ==
                full.committee_union.end())
                full.committee_union.push_back(w);
    full.initial_state = vc_->plan.initial_state;
    full.balance = vc_->plan.balance;
    full.contracts = vc_->plan.contracts;
    const auto bytes = core::register_signing_bytes(full);
    for (const auto& p : full.parties) {
        if (p == cfg_.id)
            full.party_sigs.push_back(core::sign(cfg_.id, bytes));
        else if (p == other_end())
            full.party_sigs.push_back(*vc_->other_end_sig);
        else
            full.party_sigs.push_back(vc_->intermediary_sigs.at(p));
    }
    if (!core::register_tx_valid(full)) {
        open_failed_ = true;
        ctx.send(netsim::driver_ep(), make_note(proto::note_kind::open_failed, vc_->plan.vc, 0,
                                                false));
        return;
    }
    vc_->tx_r = full;

    core::update_announcement m1;
    m1.state = vc_->plan.initial_state;
    m1.end_party_sigs = {core::sign_announcement(cfg_.id, m1.state), *vc_->other_end_s1_sig};
    vc_->committed = m1;
    vc_->highest_both_signed = m1;

    for (const auto& w : full.committee_union)
        ctx.send(netsim::actor_ep(w), proto::open_broadcast{full, m1});
}

void party::on_open_ack(const proto::open_ack& m, netsim::context& ctx) {
    if (!vc_ || m.vc != vc_->plan.vc) return;
    archive_sig(m.sig);
    const auto& w = m.sig.warden_sig.signer;
    for (std::size_t i = 0; i < vc_->plan.committees.size(); ++i) {
        const auto& committee = vc_->plan.committees[i];
        if (std::find(committee.begin(), committee.end(), w) != committee.end())
            vc_->open_acks[i].insert(w);
    }
    if (vc_->wardens_confirmed) return;
    for (std::size_t i = 0; i < vc_->plan.committees.size(); ++i)
        if (vc_->open_acks[i].size() < core::quorum_threshold(vc_->plan.f)) return;
    vc_->wardens_confirmed = true;
    start_virtual_lock(ctx);
}

// The virtual lock: each adjacent pair updates its payment channel, reserving
// the channel balance for the virtual channel. The party nearer the first
// end proposes.
void party::start_virtual_lock(netsim::context& ctx) {
    const auto& ps = vc_->plan.parties;
    const actor_id& left_end = ps.front();
    const actor_id& right_end = ps.back();
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        if (!(ps[i] == cfg_.id)) continue;
        pc_view* pc = pc_with_peer(ps[i + 1]);
        if (!pc) continue;
        coins left_amt = vc_->plan.initial_state.balances.at(left_end);
        coins right_amt = vc_->plan.initial_state.balances.at(right_end);
        if (cfg_.behavior == party_behavior::inconsistent_funder) left_amt += cfg_.funder_delta;

        core::channel_state next = pc->committed.state;
        next.seq += 1;
        next.balances[cfg_.id] -= left_amt;
        next.balances[pc->peer] -= right_amt;
        core::lock_entry lock;
        lock.vc_id = vc_->plan.vc;
        lock.amounts[cfg_.id] = left_amt;
        lock.amounts[pc->peer] = right_amt;
        next.locks.push_back(lock);
        propose_pc_update(*pc, std::move(next), proto::update_purpose::vc_lock, ctx);
    }
    for (auto& [_, pc] : pcs_) pc.expect_lock = true;
}

void party::maybe_open_complete(netsim::context& ctx) {
    if (!vc_ || vc_->open || !vc_->wardens_confirmed) return;
    for (const auto& [_, pc] : pcs_)
        if (!pc.committed.state.find_lock(vc_->plan.vc)) return;
    vc_->open = true;
    ctx.send(netsim::driver_ep(), make_note(proto::note_kind::open_done, vc_->plan.vc, 1, true));
}

// ------------------------------------------------------------- updates ----

void party::propose_pc_update(pc_view& pc, core::channel_state next,
                              proto::update_purpose purpose, netsim::context& ctx) {
    core::update_announcement m;
    m.state = std::move(next);
    pc.pending = pending_pc_update{m, purpose, {}, false};
    proto::state_propose sp;
    sp.state = pc.pending->m.state;
    sp.sig = core::sign_announcement(cfg_.id, sp.state);
    sp.purpose = purpose;
    ctx.send(netsim::actor_ep(pc.peer), sp);
}

void party::on_state_propose(const proto::state_propose& m, const actor_id& from,
                             netsim::context& ctx) {
    // Virtual channel proposals come from the other end; payment channel
    // proposals from the channel peer.
    if (vc_ && m.state.id == vc_->plan.vc) {
        if (!is_vc_end() || !(from == other_end())) return;
        if (!core::verify_announcement_sig(m.sig, from, m.state)) return;
        if (m.state.balance_total() != vc_->plan.balance) return;
        const core::seq_no base =
            vc_->highest_both_signed ? vc_->highest_both_signed->state.seq : 1;
        const bool colluding = cfg_.behavior == party_behavior::double_state_colluder &&
                               from == cfg_.collude_partner;
        if (!colluding) {
            if (m.state.seq != base + 1) return;
            auto mine = m.state.balances.find(cfg_.id);
            const coins prev = vc_->highest_both_signed
                                   ? vc_->highest_both_signed->state.balances.at(cfg_.id)
                                   : vc_->plan.initial_state.balances.at(cfg_.id);
            if (mine == m.state.balances.end() || mine->second < prev) return;  // no forced loss
        }
        core::update_announcement full;
        full.state = m.state;
        full.end_party_sigs = {m.sig, core::sign_announcement(cfg_.id, m.state)};
        proto::state_accept acc;
        acc.m = full;
        acc.purpose = m.purpose;
        acc.split_role = m.split_role;
        ctx.send(netsim::actor_ep(from), acc);
        // Track it ourselves; commit waits for the quorum certificates.
        if (!vc_->pending) vc_->pending = vc_pending_update{};
        vc_->pending->variants.push_back(full);
        vc_->pending->roles.push_back(m.split_role);
        broadcast_vc_variant(vc_->pending->variants.size() - 1, ctx);
        return;
    }

    pc_view* pc = pc_by_channel(m.state.id);
    if (!pc || !(from == pc->peer)) return;
    if (!core::verify_announcement_sig(m.sig, from, m.state)) return;
    if (m.state.seq != pc->committed.state.seq + 1) return;
    const coins total = pc->committed.state.balance_total() + pc->committed.state.locked_total();
    if (m.state.balance_total() + m.state.locked_total() != total) return;

    bool acceptable = false;
    switch (m.purpose) {
        case proto::update_purpose::payment: {
            auto mine = m.state.balances.find(cfg_.id);
            acceptable = m.state.locks == pc->committed.state.locks &&
                         mine != m.state.balances.end() &&
                         mine->second >= pc->committed.state.balances.at(cfg_.id);
            break;
        }
        case proto::update_purpose::vc_lock: {
            if (!vc_ || !pc->expect_lock) break;
            const auto* lock = m.state.find_lock(vc_->plan.vc);
            if (!lock) break;
            const auto& ps = vc_->plan.parties;
            const coins left_amt = vc_->plan.initial_state.balances.at(ps.front());
            const coins right_amt = vc_->plan.initial_state.balances.at(ps.back());
            // The proposer is nearer the first end; we cover the second end.
            acceptable = lock->amounts.size() == 2 && lock->amounts.count(from) &&
                         lock->amounts.count(cfg_.id) && lock->amounts.at(from) == left_amt &&
                         lock->amounts.at(cfg_.id) == right_amt &&
                         m.state.balances.at(cfg_.id) ==
                             pc->committed.state.balances.at(cfg_.id) - right_amt;
            if (!acceptable) {
                open_failed_ = true;
                ctx.log("refused inconsistent virtual lock");
                ctx.send(netsim::actor_ep(from), proto::state_refuse{m.state.id, m.state.seq});
                ctx.send(netsim::driver_ep(),
                         make_note(proto::note_kind::open_failed, vc_->plan.vc, 0, false));
                return;
            }
            break;
        }
        case proto::update_purpose::vc_unlock: {
            if (!vc_ || !pc->expect_unlock || !pc->have_expected_close) break;
            if (m.state.find_lock(vc_->plan.vc)) break;  // lock must be gone
            const auto* lock = pc->committed.state.find_lock(vc_->plan.vc);
            if (!lock) break;
            auto split = chainsim::split_lock(*lock, pc->expected_close_state,
                                              vc_->plan.parties.front(), from);
            acceptable = m.state.balances.at(from) ==
                             pc->committed.state.balances.at(from) + split.left &&
                         m.state.balances.at(cfg_.id) ==
                             pc->committed.state.balances.at(cfg_.id) + split.right;
            break;
        }
    }
    if (!acceptable) {
        ctx.send(netsim::actor_ep(from), proto::state_refuse{m.state.id, m.state.seq});
        return;
    }
    core::update_announcement full;
    full.state = m.state;
    full.end_party_sigs = {m.sig, core::sign_announcement(cfg_.id, m.state)};
    pc->pending = pending_pc_update{full, m.purpose, {}, false};
    ctx.send(netsim::actor_ep(from), proto::state_accept{full, m.purpose});
    broadcast_pc_update(*pc, ctx);
}

void party::on_state_accept(const proto::state_accept& m, netsim::context& ctx) {
    if (vc_ && m.m.state.id == vc_->plan.vc) {
        const actor_id ends[2] = {vc_->plan.parties.front(), vc_->plan.parties.back()};
        if (!core::announcement_valid(m.m, ends[0], ends[1])) return;
        if (!vc_->pending) vc_->pending = vc_pending_update{};
        vc_->pending->variants.push_back(m.m);
        vc_->pending->roles.push_back(m.split_role);
        broadcast_vc_variant(vc_->pending->variants.size() - 1, ctx);
        return;
    }
    pc_view* pc = pc_by_channel(m.m.state.id);
    if (!pc || !pc->pending) return;
    if (!(m.m.state == pc->pending->m.state)) return;
    if (!core::announcement_valid(m.m, cfg_.id, pc->peer)) return;
    pc->pending->m = m.m;  // now carries both signatures
    broadcast_pc_update(*pc, ctx);
}

void party::on_state_refuse(const proto::state_refuse& m, netsim::context& ctx) {
    if (pc_view* pc = pc_by_channel(m.channel); pc && pc->pending) {
        if (pc->pending->purpose == proto::update_purpose::vc_lock) {
            open_failed_ = true;
            ctx.send(netsim::driver_ep(),
                     make_note(proto::note_kind::open_failed, vc_ ? vc_->plan.vc : 0, 0, false));
        }
        pc->pending.reset();
    }
}

void party::broadcast_pc_update(pc_view& pc, netsim::context& ctx) {
    if (!pc.pending || pc.pending->broadcast) return;
    if (pc.pending->m.end_party_sigs.size() != 2) return;
    pc.pending->broadcast = true;
    for (const auto& w : pc.committee)
        ctx.send(netsim::actor_ep(w), proto::update_msg{pc.pending->m});
}

// Ordinary updates broadcast to the whole union committee. A colluder pair's
// split update routes its first variant to all committees but the last and
// the second variant to the last committee only.
void party::broadcast_vc_variant(std::size_t variant_index, netsim::context& ctx) {
    if (!vc_ || !vc_->pending || variant_index >= vc_->pending->variants.size()) return;
    const auto& m = vc_->pending->variants[variant_index];
    const std::uint8_t role = vc_->pending->roles[variant_index];
    const std::size_t last = vc_->plan.committees.size() - 1;
    for (std::size_t i = 0; i < vc_->plan.committees.size(); ++i) {
        if (role == 1 && i == last) continue;
        if (role == 2 && i != last) continue;
        for (const auto& w : vc_->plan.committees[i])
            ctx.send(netsim::actor_ep(w), proto::update_msg{m});
    }
}

void party::on_update_sig(const proto::update_sig& m, netsim::context& ctx) {
    archive_sig(m.sig);
    const auto& ann = m.sig.announcement;
    const auto& w = m.sig.warden_sig.signer;

    if (vc_ && ann.state.id == vc_->plan.vc) {
        if (!vc_->pending || vc_->pending->variants.empty()) return;
        for (std::size_t v = 0; v < vc_->pending->variants.size(); ++v) {
            if (!(vc_->pending->variants[v] == ann)) continue;
            for (std::size_t i = 0; i < vc_->plan.committees.size(); ++i) {
                const auto& committee = vc_->plan.committees[i];
                if (std::find(committee.begin(), committee.end(), w) != committee.end())
                    vc_->pending->sigs[i][v].insert(w);
            }
        }
        // Committed once every committee some variant was broadcast to has
        // reached quorum on it.
        const std::size_t threshold = core::quorum_threshold(vc_->plan.f);
        const std::size_t last = vc_->plan.committees.size() - 1;
        for (std::size_t i = 0; i < vc_->plan.committees.size(); ++i) {
            bool targeted = false;
            for (std::uint8_t role : vc_->pending->roles)
                if (role == 0 || (role == 1 && i != last) || (role == 2 && i == last))
                    targeted = true;
            if (!targeted) continue;
            bool ok = false;
            for (const auto& [_, signers] : vc_->pending->sigs[i])
                if (signers.size() >= threshold) ok = true;
            if (!ok) return;
        }
        if (vc_->pending->committed) return;
        vc_->pending->committed = true;
        const auto committed = vc_->pending->variants.front();
        vc_->committed = committed;
        if (!vc_->highest_both_signed ||
            committed.state.seq > vc_->highest_both_signed->state.seq)
            vc_->highest_both_signed = committed;
        vc_->history[committed.state.seq] = committed;
        const auto seq = committed.state.seq;
        vc_->pending.reset();
        ctx.send(netsim::driver_ep(),
                 make_note(proto::note_kind::update_done, vc_->plan.vc, seq, true));
        return;
    }

    pc_view* pc = pc_by_channel(ann.state.id);
    if (!pc || !pc->pending || !(pc->pending->m == ann)) return;
    if (std::find(pc->committee.begin(), pc->committee.end(), w) == pc->committee.end()) return;
    pc->pending->warden_sigs.insert(w);
    if (pc->pending->warden_sigs.size() < core::quorum_threshold(pc->f)) return;

    pc->committed = pc->pending->m;
    const auto purpose = pc->pending->purpose;
    pc->pending.reset();
    if (purpose == proto::update_purpose::vc_lock) {
        pc->expect_lock = false;
        maybe_open_complete(ctx);
    } else if (purpose == proto::update_purpose::vc_unlock) {
        pc->expect_unlock = false;
        if (vc_) {
            auto it = vc_->sides.find(pc->contract);
            if (it != vc_->sides.end()) it->second.status = side_close_status::unwound;
            maybe_report_close_done(ctx);
        }
    } else {
        ctx.send(netsim::driver_ep(),
                 make_note(proto::note_kind::update_done, pc->id, pc->committed.state.seq,
                           true));
    }
}

void party::start_vc_update(coins amount, std::uint8_t kind, netsim::context& ctx) {
    if (!vc_ || !is_vc_end() || !vc_->open) return;
    const core::seq_no base =
        vc_->highest_both_signed ? vc_->highest_both_signed->state.seq : 1;
    const auto base_state =
        vc_->highest_both_signed ? vc_->highest_both_signed->state : vc_->plan.initial_state;

    const bool colluder = cfg_.behavior == party_behavior::double_state_colluder;
    const bool do_split = kind == 1 && colluder;
    const bool withhold_last = kind == 2 && colluder;

    core::channel_state next = base_state;
    next.seq = base + 1;
    next.balances[cfg_.id] -= amount;
    next.balances[other_end()] += amount;

    vc_->pending = vc_pending_update{};
    proto::state_propose sp;
    sp.state = next;
    sp.sig = core::sign_announcement(cfg_.id, next);
    sp.purpose = proto::update_purpose::payment;
    sp.split_role = (do_split || withhold_last) ? 1 : 0;
    ctx.send(netsim::actor_ep(other_end()), sp);

    if (do_split) {
        // The paired state shifts the other way: same sequence number,
        // different value, destined for the other committee.
        core::channel_state alt = base_state;
        alt.seq = base + 1;
        alt.balances[cfg_.id] += amount;
        alt.balances[other_end()] -= amount;
        proto::state_propose sp2;
        sp2.state = alt;
        sp2.sig = core::sign_announcement(cfg_.id, alt);
        sp2.purpose = proto::update_purpose::payment;
        sp2.split_role = 2;
        ctx.send(netsim::actor_ep(other_end()), sp2);
    }
}

// ------------------------------------------------------------- closing ----

core::update_announcement party::close_request_state() const {
    if (cfg_.behavior == party_behavior::old_state_closer && vc_) {
        auto it = vc_->history.find(cfg_.old_close_seq);
        if (it != vc_->history.end()) return it->second;
    }
    if (vc_ && vc_->highest_both_signed) return *vc_->highest_both_signed;
    return vc_ ? vc_->committed : core::update_announcement{};
}

void party::start_close(close_mode mode, netsim::context& ctx) {
    if (!vc_) return;
    vc_->closing = true;
    vc_->mode = mode;
    for (const auto& n : my_vc_neighbors()) {
        pc_view* pc = pc_with_peer(n);
        if (pc) vc_->sides[pc->contract] = side_state(pc->contract, pc->id);
    }

    if (mode == close_mode::direct_unilateral) {
        if (is_vc_end()) {
            for (auto& [cid, _] : vc_->sides) begin_unilateral(cid, ctx);
        } else {
            // Intermediary: sequentially, first side first.
            auto it = vc_->sides.begin();
            vc_->sequential_pending = true;
            begin_unilateral(it->first, ctx);
        }
        return;
    }

    if (is_vc_end()) {
        vc_->my_close_request = close_request_state();
        for (const auto& p : vc_->plan.parties)
            if (!(p == cfg_.id))
                ctx.send(netsim::actor_ep(p),
                         proto::close_request{vc_->plan.vc, *vc_->my_close_request, true});
        vc_->close_requests_seen[cfg_.id] = *vc_->my_close_request;
        vc_->close_agreements[cfg_.id] = true;
    } else {
        // An intermediary asks the ends to state their closing states.
        proto::close_request req;
        req.vc = vc_->plan.vc;
        req.vs = vc_->committed;  // placeholder; ends answer with theirs
        req.has_vs = false;
        for (const auto& p : vc_->plan.parties)
            if (!(p == cfg_.id)) ctx.send(netsim::actor_ep(p), req);
    }
}

void party::on_close_request(const proto::close_request& m, const actor_id& from,
                             netsim::context& ctx) {
    if (!vc_ || m.vc != vc_->plan.vc) return;
    if (!vc_->closing) {
        vc_->closing = true;
        vc_->mode = close_mode::collaborative;
        for (const auto& n : my_vc_neighbors()) {
            pc_view* pc = pc_with_peer(n);
            if (pc) vc_->sides[pc->contract] = side_state(pc->contract, pc->id);
        }
    }
    if (m.has_vs) vc_->close_requests_seen[from] = m.vs;

    if (is_vc_end()) {
        // Answer with our own view; agreement only on an exact match.
        const auto mine = close_request_state();
        vc_->close_requests_seen[cfg_.id] = mine;
        if (!m.has_vs || m.vs.state == mine.state) {
            for (const auto& p : vc_->plan.parties)
                if (!(p == cfg_.id))
                    ctx.send(netsim::actor_ep(p), proto::close_agree{vc_->plan.vc, mine});
            vc_->close_agreements[cfg_.id] = true;
            note_peer_agreement(cfg_.id, mine, ctx);
        } else {
            ctx.send(netsim::actor_ep(from), proto::close_reject{vc_->plan.vc});
        }
        return;
    }
    intermediary_evaluate(ctx);
}

void party::on_close_agree(const proto::close_agree& m, const actor_id& from,
                           netsim::context& ctx) {
    if (!vc_) return;
    if (m.vc != vc_->plan.vc || !vc_->closing) return;
    vc_->close_requests_seen[from] = m.vs;
    vc_->close_agreements[from] = true;
    note_peer_agreement(from, m.vs, ctx);
    if (!is_vc_end()) intermediary_evaluate(ctx);
}

void party::on_close_reject(const proto::close_reject& m, const actor_id& from,
                            netsim::context& ctx) {
    (void)ctx;
    if (!vc_ || m.vc != vc_->plan.vc) return;
    vc_->close_agreements[from] = false;
}

// A pair unwinds once both sides of it agree on the same closing state; the
// party nearer the first end proposes the unlock update.
void party::note_peer_agreement(const actor_id& who, const core::update_announcement& vs,
                                netsim::context& ctx) {
    if (!vc_ || !vc_->closing) return;
    const auto& ps = vc_->plan.parties;
    if (cfg_.behavior == party_behavior::collusive_intermediary && !is_vc_end()) {
        // Agrees with whatever arrives first.
        vc_->close_requests_seen[cfg_.id] = vs;
        vc_->close_agreements[cfg_.id] = true;
    }
    const auto my_it = vc_->close_requests_seen.find(cfg_.id);
    if (my_it == vc_->close_requests_seen.end()) return;
    if (!vc_->close_agreements.count(cfg_.id)) return;

    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        const bool on_left = ps[i] == cfg_.id && ps[i + 1] == who;
        const bool on_right = ps[i + 1] == cfg_.id && ps[i] == who;
        if (!on_left && !on_right) continue;
        auto peer_req = vc_->close_requests_seen.find(who);
        if (peer_req == vc_->close_requests_seen.end()) return;
        if (!(peer_req->second.state == my_it->second.state)) return;
        pc_view* pc = pc_with_peer(who);
        if (!pc || pc->expect_unlock || pc->closed_onchain) return;
        pc->expect_unlock = true;
        pc->expected_close_state = my_it->second;
        pc->have_expected_close = true;
        if (on_left) {
            const auto* lock = pc->committed.state.find_lock(vc_->plan.vc);
            if (!lock) return;
            auto split = chainsim::split_lock(*lock, my_it->second, ps.front(), cfg_.id);
            core::channel_state next = pc->committed.state;
            next.seq += 1;
            next.balances[cfg_.id] += split.left;
            next.balances[who] += split.right;
            next.locks.erase(std::remove_if(next.locks.begin(), next.locks.end(),
                                            [&](const core::lock_entry& l) {
                                                return l.vc_id == vc_->plan.vc;
                                            }),
                             next.locks.end());
            propose_pc_update(*pc, std::move(next), proto::update_purpose::vc_unlock, ctx);
        }
    }
}

// Intermediary logic: matching statements from both neighbors let it agree;
// different statements mean collusion and force sequential unilateral closes.
void party::intermediary_evaluate(netsim::context& ctx) {
    if (!vc_ || is_vc_end() || !vc_->closing) return;
    if (cfg_.behavior == party_behavior::collusive_intermediary) {
        for (const auto& [who, vs] : vc_->close_requests_seen) {
            if (who == cfg_.id) continue;
            vc_->close_requests_seen[cfg_.id] = vs;
            vc_->close_agreements[cfg_.id] = true;
            for (const auto& p : vc_->plan.parties)
                if (!(p == cfg_.id))
                    ctx.send(netsim::actor_ep(p), proto::close_agree{vc_->plan.vc, vs});
            note_peer_agreement(who, vs, ctx);
            return;
        }
        return;
    }
    std::vector<std::pair<actor_id, core::update_announcement>> stated;
    for (const auto& [who, vs] : vc_->close_requests_seen)
        if (!(who == cfg_.id)) stated.emplace_back(who, vs);
    // A side already settled on-chain speaks through its settled state.
    if (stated.size() == 1 && vc_->learned_settle_state) {
        for (const auto& [cid, side] : vc_->sides) {
            if (side.status != side_close_status::settled) continue;
            pc_view* pc = pc_by_channel(side.pc);
            if (pc && !(pc->peer == stated[0].first))
                stated.emplace_back(pc->peer, *vc_->learned_settle_state);
        }
    }
    if (stated.size() < 2) return;  // patience may later force unilateral
    if (stated[0].second.state == stated[1].second.state) {
        if (vc_->close_agreements.count(cfg_.id)) return;
        vc_->close_requests_seen[cfg_.id] = stated[0].second;
        vc_->close_agreements[cfg_.id] = true;
        for (const auto& p : vc_->plan.parties)
            if (!(p == cfg_.id))
                ctx.send(netsim::actor_ep(p), proto::close_agree{vc_->plan.vc, stated[0].second});
        for (const auto& [who, vs] : stated) note_peer_agreement(who, vs, ctx);
    } else {
        // Conflicting valid requests: unilateral closes, one side after the
        // other.
        ctx.log("conflicting close requests; closing unilaterally");
        if (vc_->sequential_pending) return;
        vc_->sequential_pending = true;
        begin_unilateral(vc_->sides.begin()->first, ctx);
    }
}

void party::on_patience_expired(netsim::context& ctx) {
    if (!vc_ || !vc_->closing) return;
    if (is_vc_end()) {
        for (auto& [cid, side] : vc_->sides) {
            if (side.status == side_close_status::idle ||
                side.status == side_close_status::requested ||
                side.status == side_close_status::agreed)
                begin_unilateral(cid, ctx);
        }
        return;
    }
    // Intermediary with a single stated request: close the silent side first
    // to learn the state.
    std::vector<actor_id> stated;
    for (const auto& [who, _] : vc_->close_requests_seen)
        if (!(who == cfg_.id)) stated.push_back(who);
    if (vc_->close_agreements.count(cfg_.id)) return;  // already settled collaboratively
    if (vc_->sequential_pending) return;
    if (stated.size() == 1) {
        for (auto& [cid, side] : vc_->sides) {
            pc_view* pc = pc_by_channel(side.pc);
            if (pc && !(pc->peer == stated[0])) {
                vc_->sequential_pending = true;
                begin_unilateral(cid, ctx);
                return;
            }
        }
    } else if (stated.empty()) {
        vc_->sequential_pending = true;
        begin_unilateral(vc_->sides.begin()->first, ctx);
    }
}

void party::begin_unilateral(chainsim::contract_id contract, netsim::context& ctx) {
    if (!vc_) return;
    auto& side = vc_->sides[contract];
    if (side.status == side_close_status::unwound ||
        side.status == side_close_status::settled ||
        side.status == side_close_status::registered ||
        side.status == side_close_status::proofs_sent)
        return;
    if (!vc_->tx_r) {
        ctx.log("no register transaction held; cannot close unilaterally");
        ctx.send(netsim::driver_ep(), make_note(proto::note_kind::close_done, vc_->plan.vc, 0,
                                                false));
        return;
    }
    side.status = side_close_status::registered;
    chainsim::register_vc_body body{contract, *vc_->tx_r};
    ctx.send(netsim::blockchain_ep(),
             proto::chain_tx{
                 chainsim::make_actor_tx(chainsim::tx_kind::register_vc, cfg_.id, body)});
}

std::vector<core::proof_of_fraud> party::compute_proofs(const side_state& side) const {
    std::vector<core::proof_of_fraud> proofs;
    if (cfg_.behavior != party_behavior::honest) return proofs;  // colluders withhold
    auto chan_it = archive_.find(vc_->plan.vc);
    if (chan_it == archive_.end()) return proofs;
    for (const auto& entry : side.publication_entries) {
        if (!entry.vc) continue;
        auto w_it = chan_it->second.find(entry.warden);
        if (w_it == chan_it->second.end()) continue;
        const auto pub_seq = entry.vc->announcement.state.seq;
        for (const auto& [seq, sigs] : w_it->second) {
            for (const auto& archived : sigs) {
                const bool higher = seq > pub_seq;
                const bool conflict =
                    seq == pub_seq && !(archived.announcement.state ==
                                        entry.vc->announcement.state);
                if (!higher && !conflict) continue;
                core::proof_of_fraud pof;
                pof.accused = entry.warden;
                pof.published = *entry.vc;
                pof.conflicting = archived;
                if (core::validate_proof_of_fraud(pof)) {
                    proofs.push_back(std::move(pof));
                    goto next_entry;
                }
            }
        }
    next_entry:;
    }
    return proofs;
}

void party::submit_proofs_for(side_state& side, netsim::context& ctx) {
    if (side.proofs_submitted) return;
    side.proofs_submitted = true;
    side.status = side_close_status::proofs_sent;
    chainsim::submit_proofs_body body;
    body.contract = side.contract;
    body.proofs = compute_proofs(side);
    ctx.log("submitting " + std::to_string(body.proofs.size()) + " proofs");
    ctx.send(netsim::blockchain_ep(),
             proto::chain_tx{
                 chainsim::make_actor_tx(chainsim::tx_kind::submit_proofs, cfg_.id, body)});
}

void party::handle_block(const proto::block_notify& bn, netsim::context& ctx) {
    for (const auto& at : bn.b.txs) {
        if (at.status == chainsim::apply_status::rejected) continue;
        if (at.transaction.kind == chainsim::tx_kind::publish_state && vc_ && vc_->closing) {
            const auto& body = std::get<chainsim::publish_state_body>(at.transaction.body);
            auto side_it = vc_->sides.find(body.contract);
            if (side_it == vc_->sides.end()) continue;
            auto& side = side_it->second;
            if (side.publications_seen.count(body.entry.warden)) continue;
            side.publications_seen.insert(body.entry.warden);
            side.publication_entries.push_back(body.entry);
            if (side.publications_seen.size() >= core::quorum_threshold(vc_->plan.f) &&
                !side.proofs_submitted)
                submit_proofs_for(side, ctx);
        } else if (at.transaction.kind == chainsim::tx_kind::register_vc && vc_) {
            const auto& body = std::get<chainsim::register_vc_body>(at.transaction.body);
            // Someone is closing one of our channels; start watching it.
            for (const auto& [_, pc] : pcs_) {
                if (pc.contract != body.contract) continue;
                if (!vc_->closing) {
                    vc_->closing = true;
                    vc_->mode = close_mode::collaborative;
                }
                if (!vc_->sides.count(body.contract))
                    vc_->sides[body.contract] = side_state(body.contract, pc.id);
            }
        }
    }
    for (const auto& ev : bn.settlements) on_settle_event(ev, ctx);
}

void party::on_settle_event(const chainsim::settle_event& ev, netsim::context& ctx) {
    for (auto& [_, pc] : pcs_) {
        if (pc.contract != ev.contract) continue;
        pc.closed_onchain = true;
        if (!vc_) continue;
        auto side_it = vc_->sides.find(ev.contract);
        if (side_it != vc_->sides.end()) {
            side_it->second.status = side_close_status::settled;
            if (ev.applied_ws) vc_->learned_settle_state = ev.applied_ws;
        }
        // Sequential intermediary closes: learn the state, then handle the
        // remaining side.
        if (!is_vc_end() && vc_->sequential_pending) {
            vc_->sequential_pending = false;
            for (auto& [cid, side] : vc_->sides) {
                if (cid == ev.contract) continue;
                if (side.status >= side_close_status::registered ||
                    side.status == side_close_status::unwound)
                    continue;
                // A pending collaborative request that matches the settled
                // state exactly can be honored; anything else closes
                // unilaterally.
                pc_view* pc = pc_by_channel(side.pc);
                bool honored = false;
                if (pc && vc_->learned_settle_state) {
                    auto req = vc_->close_requests_seen.find(pc->peer);
                    if (req != vc_->close_requests_seen.end() &&
                        req->second.state == vc_->learned_settle_state->state) {
                        vc_->close_requests_seen[cfg_.id] = req->second;
                        vc_->close_agreements[cfg_.id] = true;
                        for (const auto& p : vc_->plan.parties)
                            if (!(p == cfg_.id))
                                ctx.send(netsim::actor_ep(p),
                                         proto::close_agree{vc_->plan.vc, req->second});
                        note_peer_agreement(pc->peer, req->second, ctx);
                        honored = true;
                    }
                }
                if (!honored) begin_unilateral(cid, ctx);
            }
        }
        maybe_report_close_done(ctx);
    }
}

void party::maybe_report_close_done(netsim::context& ctx) {
    if (!vc_ || !vc_->closing || vc_->close_reported) return;
    for (const auto& [_, side] : vc_->sides)
        if (side.status != side_close_status::unwound &&
            side.status != side_close_status::settled)
            return;
    vc_->close_reported = true;
    ctx.send(netsim::driver_ep(), make_note(proto::note_kind::close_done, vc_->plan.vc, 0, true));
}

void party::start_pc_close(core::channel_id ch, bool force_unilateral, netsim::context& ctx) {
    pc_view* pc = pc_by_channel(ch);
    if (!pc || pc->closed_onchain) return;
    // The virtual channel must settle before the payment channel closes;
    // skipping it forfeits the whole balance. With the lock still standing
    // the honest move is the unilateral closing protocol.
    if (vc_ && pc->committed.state.find_lock(vc_->plan.vc)) {
        auto side_it = vc_->sides.find(pc->contract);
        const bool resolved = side_it != vc_->sides.end() &&
                              (side_it->second.status == side_close_status::unwound ||
                               side_it->second.status == side_close_status::settled);
        if (!resolved) {
            if (!vc_->closing) {
                vc_->closing = true;
                vc_->sides[pc->contract] = side_state(pc->contract, pc->id);
            }
            begin_unilateral(pc->contract, ctx);
            return;
        }
    }
    if (force_unilateral) {
        chainsim::close_pc_after_vc_body body{pc->contract};
        ctx.send(netsim::blockchain_ep(),
                 proto::chain_tx{chainsim::make_actor_tx(chainsim::tx_kind::close_pc_after_vc,
                                                         cfg_.id, body)});
        return;
    }
    chainsim::collab_close_body body;
    body.contract = pc->contract;
    body.final_state = pc->committed.state;
    body.party_sigs = pc->committed.end_party_sigs;
    ctx.send(netsim::blockchain_ep(),
             proto::chain_tx{
                 chainsim::make_actor_tx(chainsim::tx_kind::collab_close_pc, cfg_.id, body)});
}

}  // namespace vcsim::actors
