#pragma once

#include "vcsim/chainsim/settlement.hpp"

#include <set>
#include <string>

namespace vcsim::chainsim {

enum class contract_phase : std::uint8_t {
    open,
    vc_registered,
    vc_collecting,
    vc_crosschecking,
    vc_closed,
    pc_closed,
};

const char* phase_name(contract_phase p);

enum class apply_status : std::uint8_t { applied, rejected, ignored };

// Things a contract does while applying a transaction, surfaced to the ledger:
// coin movements out of escrow and cross-check emissions to peer contracts.
struct payout {
    actor_id to;
    coins amount = 0;
    std::string reason;
};

struct contract_effects {
    apply_status status = apply_status::applied;
    std::string detail;
    std::vector<payout> payouts;
    std::vector<cross_check_body> emissions;
    bool settled_vc = false;
    bool closed_pc = false;
    bool penalty = false;
};

struct warden_slot {
    actor_id id;
    coins collateral = 0;   // escrowed amount still held
    bool funded = false;
    bool slashed = false;
};

struct pending_collab {
    core::channel_state state;
    std::vector<core::signature> sigs;
    std::set<actor_id> submitters;
};

enum class ws_origin : std::uint8_t { none, own, adopted };

// On-chain state machine for one payment channel and (at most) one registered
// virtual channel closing through it.
class contract {
  public:
    contract() = default;
    contract(const deploy_channel_body& cfg);

    contract_id id() const { return id_; }
    contract_phase phase() const { return phase_; }
    bool fully_funded() const;
    coins escrow() const { return escrow_; }
    const std::vector<actor_id>& parties() const { return parties_; }
    std::vector<actor_id> committee() const {
        std::vector<actor_id> out;
        for (const auto& w : wardens_) out.push_back(w.id);
        return out;
    }
    const std::vector<warden_slot>& warden_slots() const { return wardens_; }
    std::uint32_t f() const { return f_; }
    coins collateral_per_warden() const { return collateral_per_warden_; }
    bool is_leader() const;
    const std::optional<core::register_tx>& vc_register() const { return register_; }
    const std::optional<core::update_announcement>& decided_ws() const { return ws_final_; }
    ws_origin ws_source() const { return ws_source_; }
    const core::channel_state& funding_state() const { return funding_state_; }
    const std::vector<publication_entry>& publications() const { return publications_; }
    std::size_t valid_publication_count() const;
    const std::optional<core::update_announcement>& applied_ws() const { return applied_ws_; }
    bool settled_by_fraud_overflow() const { return settled_by_fraud_overflow_; }
    std::size_t valid_proof_count() const { return proven_fraud_.size(); }
    bool fee_shortfall() const { return fee_shortfall_; }
    coins deposit_held(const actor_id& who) const {
        auto it = deposits_held_.find(who);
        return it == deposits_held_.end() ? 0 : it->second;
    }
    coins fee_held(const actor_id& who) const {
        auto it = fee_held_.find(who);
        return it == fee_held_.end() ? 0 : it->second;
    }
    coins fee_planned(const actor_id& who) const {
        auto it = fee_plan_.find(who);
        return it == fee_plan_.end() ? 0 : it->second;
    }

    // Funding. The deploying party's own deposit and fee share arrive with
    // deploy; the peer and the wardens follow with their own transactions.
    coins expected_party_funding(const actor_id& who) const;
    contract_effects fund_party(const actor_id& who, coins amount);
    contract_effects fund_warden(const actor_id& who, coins amount);

    contract_effects handle_register(const core::register_tx& reg, bool auto_registered = false);
    contract_effects handle_publication(const publication_entry& entry);
    contract_effects handle_crosscheck(const cross_check_body& body);
    contract_effects handle_proofs(const actor_id& submitter,
                                   const std::vector<core::proof_of_fraud>& proofs);
    contract_effects handle_collab_close(const actor_id& submitter, const collab_close_body& body);
    contract_effects handle_pc_close_request(const actor_id& submitter);

    // Simulation knobs, set at deploy time by the scenario.
    void set_disable_crosscheck(bool v) { disable_crosscheck_ = v; }

  private:
    bool is_party(const actor_id& a) const;
    bool is_committee_member(const actor_id& a) const;
    actor_id counterparty_of(const actor_id& a) const;
    bool validate_pc_component(const core::signed_state_publication& p) const;
    bool validate_vc_component(const core::signed_state_publication& p) const;
    void bump_ws(const core::update_announcement& ws, ws_origin origin,
                 contract_effects& fx, contract_id already_current_peer,
                 bool has_already_current_peer);
    void emit_pending(contract_effects& fx);
    void maybe_decide_own(contract_effects& fx);
    void maybe_settle(contract_effects& fx);
    void settle_vc_and_close(contract_effects& fx);
    void settle_pc_only(contract_effects& fx);
    void close_penalty(const actor_id& offender, contract_effects& fx);
    void pay(contract_effects& fx, const actor_id& to, coins amount, const std::string& reason);
    void return_collateral_and_fee(contract_effects& fx);
    void refund_fee_remainder(contract_effects& fx, coins fee_paid);
    core::channel_state settled_pc_state() const;
    settlement_input make_settlement_input() const;

    contract_id id_ = 0;
    core::channel_id pc_channel_ = 0;
    std::vector<actor_id> parties_;
    std::map<actor_id, coins> deposit_plan_;
    std::map<actor_id, coins> deposits_held_;
    std::map<actor_id, coins> fee_plan_;
    std::map<actor_id, coins> fee_held_;
    std::vector<warden_slot> wardens_;
    std::uint32_t f_ = 1;
    coins collateral_per_warden_ = 0;
    coins escrow_ = 0;

    contract_phase phase_ = contract_phase::open;
    core::channel_state funding_state_;
    std::optional<core::register_tx> register_;
    std::vector<contract_id> peers_;

    std::vector<publication_entry> publications_;
    std::set<actor_id> publishers_;
    std::set<actor_id> proven_fraud_;
    bool proofs_submitted_ = false;
    actor_id proof_submitter_;

    std::optional<core::update_announcement> ws_final_;
    ws_origin ws_source_ = ws_origin::none;
    std::uint64_t ws_version_ = 0;
    std::map<contract_id, std::uint64_t> sent_version_;
    std::set<contract_id> responded_peers_;
    std::vector<cross_check_body> outbox_;

    std::optional<pending_collab> pending_collab_;
    bool pc_close_requested_ = false;

    std::optional<core::update_announcement> applied_ws_;
    bool settled_by_fraud_overflow_ = false;
    bool fee_shortfall_ = false;
    bool disable_crosscheck_ = false;
};

}  // namespace vcsim::chainsim
