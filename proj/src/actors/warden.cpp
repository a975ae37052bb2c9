#include "vcsim/actors/warden.hpp"

#include "vcsim/core/crypto.hpp"
#include "vcsim/core/quorum.hpp"

#include <algorithm>

namespace vcsim::actors {

void warden::add_pc_channel(core::channel_id ch, chainsim::contract_id contract,
                            std::vector<actor_id> parties,
                            const core::update_announcement& funding) {
    warden_channel wc;
    wc.id = ch;
    wc.signers = std::move(parties);
    wc.contracts = {contract};
    wc.is_vc = false;
    channels_[ch] = wc;
    contract_pc_[contract] = ch;
    record_signed(ch, funding);
}

void warden::record_signed(core::channel_id ch, const core::update_announcement& m) {
    auto& st = store_[ch];
    st.signed_by_seq[m.state.seq].push_back(m);
    st.highest = std::max(st.highest, m.state.seq);
}

const core::update_announcement* warden::highest_signed(core::channel_id ch) const {
    auto it = store_.find(ch);
    if (it == store_.end() || it->second.signed_by_seq.empty()) return nullptr;
    return &it->second.signed_by_seq.rbegin()->second.front();
}

void warden::on_message(const netsim::envelope& env, netsim::context& ctx) {
    if (crashed_) return;
    if (const auto* c = std::get_if<proto::control>(&env.payload)) return handle_control(*c, ctx);
    if (const auto* ob = std::get_if<proto::open_broadcast>(&env.payload))
        return handle_open_broadcast(*ob, ctx);
    if (const auto* um = std::get_if<proto::update_msg>(&env.payload))
        return handle_update(*um, ctx);
    if (const auto* bn = std::get_if<proto::block_notify>(&env.payload))
        return handle_block(*bn, ctx);
}

void warden::handle_control(const proto::control& c, netsim::context& ctx) {
    switch (c.kind) {
        case proto::ctl_kind::crash:
            crashed_ = true;
            return;
        case proto::ctl_kind::fund: {
            for (chainsim::contract_id contract : pending_funding_) {
                chainsim::fund_warden_body body{contract};
                ctx.send(netsim::blockchain_ep(),
                         proto::chain_tx{chainsim::make_actor_tx(
                             chainsim::tx_kind::fund_warden, cfg_.id, body)});
            }
            pending_funding_.clear();
            ctx.send(netsim::driver_ep(), proto::note{proto::note_kind::funded, 0, 0, true});
            return;
        }
        default:
            return;
    }
}

void warden::handle_open_broadcast(const proto::open_broadcast& ob, netsim::context& ctx) {
    if (!core::register_tx_valid(ob.reg)) return;
    const auto& reg = ob.reg;
    if (!core::announcement_valid(ob.m1, reg.parties.front(), reg.parties.back())) return;
    const core::channel_id vc = reg.initial_state.id;
    if (channels_.count(vc)) return;  // already known

    warden_channel wc;
    wc.id = vc;
    wc.signers = {reg.parties.front(), reg.parties.back()};
    wc.is_vc = true;
    for (std::size_t i = 0; i < reg.committees.size() && i < reg.contracts.contracts.size();
         ++i) {
        const auto& committee = reg.committees[i];
        if (std::find(committee.begin(), committee.end(), cfg_.id) != committee.end()) {
            wc.contracts.push_back(reg.contracts.contracts[i]);
            contract_vc_[reg.contracts.contracts[i]] = vc;
        }
    }
    if (wc.contracts.empty()) return;  // not our committee
    channels_[vc] = wc;

    record_signed(vc, ob.m1);
    const auto sig = core::sign_announcement(cfg_.id, ob.m1.state);
    for (const auto& p : reg.parties) {
        if (cfg_.behavior == warden_behavior::withholder && p == cfg_.withhold_target) continue;
        ctx.send(netsim::actor_ep(p),
                 proto::open_ack{vc, core::archived_warden_sig{ob.m1, sig}});
    }
}

// Protocol rule: sign iff both parties' signatures are present and the
// sequence number is exactly one higher than the previously stored one; a
// warden that has published a closing state, or already signed this sequence,
// ignores the update.
void warden::handle_update(const proto::update_msg& um, netsim::context& ctx) {
    auto chan_it = channels_.find(um.m.state.id);
    if (chan_it == channels_.end()) return;
    const auto& wc = chan_it->second;
    auto& st = store_[wc.id];

    if (!core::announcement_valid(um.m, wc.signers[0], wc.signers[1])) return;
    if (st.published_closing) return;

    const core::seq_no seq = um.m.state.seq;
    const auto seq_it = st.signed_by_seq.find(seq);
    const bool already_exact =
        seq_it != st.signed_by_seq.end() &&
        std::any_of(seq_it->second.begin(), seq_it->second.end(),
                    [&](const auto& m) { return m == um.m; });
    if (already_exact) return;

    const bool fresh_next = seq == st.highest + 1;
    const bool conflicting_resign = seq_it != st.signed_by_seq.end();
    if (!fresh_next &&
        !(conflicting_resign && cfg_.behavior == warden_behavior::double_signer))
        return;
    if (conflicting_resign && cfg_.behavior != warden_behavior::double_signer) return;

    record_signed(wc.id, um.m);
    const auto sig = core::sign_announcement(cfg_.id, um.m.state);
    for (const auto& p : wc.signers) {
        if (cfg_.behavior == warden_behavior::withholder && p == cfg_.withhold_target) continue;
        ctx.send(netsim::actor_ep(p),
                 proto::update_sig{core::archived_warden_sig{um.m, sig}});
    }
}

void warden::handle_block(const proto::block_notify& bn, netsim::context& ctx) {
    for (const auto& at : bn.b.txs) {
        if (at.status == chainsim::apply_status::rejected) continue;
        if (at.transaction.kind == chainsim::tx_kind::register_vc) {
            const auto& body = std::get<chainsim::register_vc_body>(at.transaction.body);
            const auto vc_it = contract_vc_.find(body.contract);
            const auto pc_it = contract_pc_.find(body.contract);
            // Publication requires committee membership via either channel.
            if (vc_it != contract_vc_.end() || pc_it != contract_pc_.end())
                publish_for(body.contract, ctx);
        } else if (at.transaction.kind == chainsim::tx_kind::close_pc_after_vc) {
            const auto& body = std::get<chainsim::close_pc_after_vc_body>(at.transaction.body);
            if (contract_pc_.count(body.contract)) publish_for(body.contract, ctx);
        }
    }
}

std::optional<core::signed_state_publication> warden::make_publication(
    core::channel_id ch) const {
    auto it = store_.find(ch);
    if (it == store_.end() || it->second.signed_by_seq.empty()) return std::nullopt;
    const auto& st = it->second;

    const core::update_announcement* pick = nullptr;
    if (cfg_.behavior == warden_behavior::stale_publisher && channels_.at(ch).is_vc) {
        // Publish the configured old sequence when stored, else the oldest.
        auto seq_it = st.signed_by_seq.find(cfg_.stale_seq);
        if (seq_it == st.signed_by_seq.end()) seq_it = st.signed_by_seq.begin();
        pick = &seq_it->second.front();
    } else {
        pick = &st.signed_by_seq.rbegin()->second.front();
    }
    core::signed_state_publication pub;
    pub.warden = cfg_.id;
    pub.announcement = *pick;
    pub.warden_sig = core::sign_announcement(cfg_.id, pick->state);
    return pub;
}

void warden::publish_for(chainsim::contract_id contract, netsim::context& ctx) {
    if (published_.count(contract)) return;
    if (cfg_.behavior == warden_behavior::withholder) return;
    published_.insert(contract);

    chainsim::publish_state_body body;
    body.contract = contract;
    body.entry.warden = cfg_.id;
    if (auto pc_it = contract_pc_.find(contract); pc_it != contract_pc_.end()) {
        body.entry.pc = make_publication(pc_it->second);
        store_[pc_it->second].published_closing = true;
    }
    if (auto vc_it = contract_vc_.find(contract); vc_it != contract_vc_.end()) {
        body.entry.vc = make_publication(vc_it->second);
        store_[vc_it->second].published_closing = true;
    }
    if (!body.entry.pc && !body.entry.vc) return;
    ctx.send(netsim::blockchain_ep(),
             proto::chain_tx{
                 chainsim::make_actor_tx(chainsim::tx_kind::publish_state, cfg_.id, body)});
}

}  // namespace vcsim::actors
