#include "vcsim/chainsim/ledger.hpp"

#include "vcsim/core/quorum.hpp"

#include <sstream>

namespace vcsim::chainsim {

void ledger::credit_external(const actor_id& who, coins amount) {
    external_[who] += amount;
}

coins ledger::external_balance(const actor_id& who) const {
    auto it = external_.find(who);
    return it == external_.end() ? 0 : it->second;
}

bool ledger::debit_external(const actor_id& who, coins amount) {
    auto it = external_.find(who);
    if (it == external_.end() || it->second < amount) return false;
    it->second -= amount;
    return true;
}

contract* ledger::find_contract(contract_id id) {
    auto it = contracts_.find(id);
    return it == contracts_.end() ? nullptr : &it->second;
}

const contract* ledger::find_contract(contract_id id) const {
    auto it = contracts_.find(id);
    return it == contracts_.end() ? nullptr : &it->second;
}

coins ledger::total_coins() const {
    coins t = 0;
    for (const auto& [_, v] : external_) t += v;
    for (const auto& [_, c] : contracts_) t += c.escrow();
    return t;
}

block_result ledger::mine_block(std::vector<tx> txs) {
    block_result out;
    out.mined.height = blocks_.size() + 1;
    for (auto& t : txs) out.mined.txs.push_back(apply(std::move(t), out));
    blocks_.push_back(out.mined);
    return out;
}

applied_tx ledger::apply(tx t, block_result& out) {
    applied_tx rec;
    rec.transaction = t;

    auto finish = [&](const contract_effects& fx, contract* c) -> applied_tx& {
        rec.status = fx.status;
        rec.detail = fx.detail;
        for (const auto& p : fx.payouts) external_[p.to] += p.amount;
        for (const auto& e : fx.emissions) out.emissions.push_back(e);
        if (fx.settled_vc || fx.closed_pc || fx.penalty) {
            settle_event ev;
            ev.contract = c ? c->id() : 0;
            ev.penalty = fx.penalty;
            ev.fraud_overflow = c && c->settled_by_fraud_overflow();
            ev.applied_ws = c ? c->applied_ws() : std::nullopt;
            out.settlements.push_back(std::move(ev));
        }
        return rec;
    };
    auto rejected = [&](const std::string& why) -> applied_tx& {
        rec.status = apply_status::rejected;
        rec.detail = why;
        return rec;
    };

    switch (t.kind) {
        case tx_kind::deploy_channel: {
            const auto& body = std::get<deploy_channel_body>(t.body);
            if (contracts_.count(body.contract)) return rejected("contract id in use");
            if (body.parties.size() != 2) return rejected("channel needs two parties");
            if (body.committee.size() != core::committee_size(body.f))
                return rejected("committee size must be 3f+1");
            contract c(body);
            c.set_disable_crosscheck(disable_crosscheck_);
            auto [it, _] = contracts_.emplace(body.contract, std::move(c));
            // Deployer funds in the same transaction.
            const auto& who = t.sender.actor;
            coins amount = 0;
            if (auto d = body.deposits.find(who); d != body.deposits.end()) amount += d->second;
            if (auto fc = body.fee_contributions.find(who); fc != body.fee_contributions.end())
                amount += fc->second;
            if (!debit_external(who, amount)) return rejected("deployer cannot fund deposit");
            return finish(it->second.fund_party(who, amount), &it->second);
        }
        case tx_kind::fund_party: {
            const auto& body = std::get<fund_party_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            const auto& who = t.sender.actor;
            const coins expected = c->expected_party_funding(who);
            if (!debit_external(who, expected)) return rejected("party cannot fund deposit");
            auto fx = c->fund_party(who, expected);
            if (fx.status == apply_status::rejected) external_[who] += expected;
            return finish(fx, c);
        }
        case tx_kind::fund_warden: {
            const auto& body = std::get<fund_warden_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            const auto& who = t.sender.actor;
            const coins amount = c->collateral_per_warden();
            if (!debit_external(who, amount)) return rejected("warden cannot fund collateral");
            auto fx = c->fund_warden(who, amount);
            if (fx.status == apply_status::rejected) external_[who] += amount;
            return finish(fx, c);
        }
        case tx_kind::collab_close_pc: {
            const auto& body = std::get<collab_close_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            return finish(c->handle_collab_close(t.sender.actor, body), c);
        }
        case tx_kind::register_vc: {
            const auto& body = std::get<register_vc_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            return finish(c->handle_register(body.reg), c);
        }
        case tx_kind::publish_state: {
            const auto& body = std::get<publish_state_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            if (!(t.sender.actor == body.entry.warden))
                return rejected("publication sender mismatch");
            return finish(c->handle_publication(body.entry), c);
        }
        case tx_kind::submit_proofs: {
            const auto& body = std::get<submit_proofs_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            return finish(c->handle_proofs(t.sender.actor, body.proofs), c);
        }
        case tx_kind::cross_check: {
            const auto& body = std::get<cross_check_body>(t.body);
            if (!t.sender.is_contract || t.sender.contract != body.from)
                return rejected("cross-check must come from its contract");
            auto* c = find_contract(body.to);
            if (!c) return rejected("no such contract");
            return finish(c->handle_crosscheck(body), c);
        }
        case tx_kind::close_pc_after_vc: {
            const auto& body = std::get<close_pc_after_vc_body>(t.body);
            auto* c = find_contract(body.contract);
            if (!c) return rejected("no such contract");
            return finish(c->handle_pc_close_request(t.sender.actor), c);
        }
    }
    return rejected("unknown transaction kind");
}

std::string ledger::dump() const {
    std::ostringstream os;
    for (const auto& b : blocks_) {
        os << "block " << b.height << "\n";
        for (const auto& at : b.txs) {
            os << "  " << tx_kind_name(at.transaction.kind) << " from ";
            if (at.transaction.sender.is_contract)
                os << "contract#" << at.transaction.sender.contract;
            else
                os << at.transaction.sender.actor.label;
            os << " -> "
               << (at.status == apply_status::applied
                       ? "applied"
                       : at.status == apply_status::ignored ? "ignored" : "rejected")
               << " (" << at.detail << ")\n";
        }
    }
    os << "final balances\n";
    for (const auto& [who, amount] : external_)
        os << "  " << who.label << ": " << amount << "\n";
    return os.str();
}

}  // namespace vcsim::chainsim
