#pragma once

#include "vcsim/core/types.hpp"

#include <variant>

namespace vcsim::chainsim {

using core::actor_id;
using core::coins;
using core::contract_id;

enum class tx_kind : std::uint8_t {
    deploy_channel,
    fund_party,
    fund_warden,
    collab_close_pc,
    register_vc,
    publish_state,
    submit_proofs,
    cross_check,
    close_pc_after_vc,
};

const char* tx_kind_name(tx_kind k);

// What one warden puts on-chain during a unilateral close: its highest stored
// payment-channel announcement and, when a virtual channel is being closed,
// its highest signed virtual-channel announcement.
struct publication_entry {
    actor_id warden;
    std::optional<core::signed_state_publication> pc;
    std::optional<core::signed_state_publication> vc;
};

struct deploy_channel_body {
    contract_id contract = 0;
    core::channel_id pc_channel = 0;
    std::vector<actor_id> parties;                 // exactly two
    std::map<actor_id, coins> deposits;            // full deposit plan
    std::vector<actor_id> committee;               // 3f+1 wardens
    std::uint32_t f = 1;
    coins collateral_per_warden = 0;
    std::map<actor_id, coins> fee_contributions;   // closing-fee escrow plan
};

struct fund_party_body {
    contract_id contract = 0;
};

struct fund_warden_body {
    contract_id contract = 0;
};

struct collab_close_body {
    contract_id contract = 0;
    core::channel_state final_state;
    std::vector<core::signature> party_sigs;       // both parties, over final_state
};

struct register_vc_body {
    contract_id contract = 0;
    core::register_tx reg;
};

struct publish_state_body {
    contract_id contract = 0;
    publication_entry entry;
};

struct submit_proofs_body {
    contract_id contract = 0;
    std::vector<core::proof_of_fraud> proofs;      // possibly empty
};

// Contract-to-contract notification-and-query. Carries the register so the
// peer can validate the sender even when nobody registered on its side yet.
struct cross_check_body {
    contract_id from = 0;
    contract_id to = 0;
    std::optional<core::update_announcement> ws;   // nullopt = NULL reply
    core::register_tx reg;
    bool is_reply = false;
};

struct close_pc_after_vc_body {
    contract_id contract = 0;
};

using tx_body = std::variant<deploy_channel_body, fund_party_body, fund_warden_body,
                             collab_close_body, register_vc_body, publish_state_body,
                             submit_proofs_body, cross_check_body, close_pc_after_vc_body>;

// Sender is a main party or warden for user transactions, or a contract for
// cross-check transactions.
struct tx_sender {
    bool is_contract = false;
    actor_id actor;
    contract_id contract = 0;
};

struct tx {
    tx_kind kind = tx_kind::deploy_channel;
    tx_sender sender;
    tx_body body;
};

tx make_actor_tx(tx_kind kind, const actor_id& sender, tx_body body);
tx make_contract_tx(tx_kind kind, contract_id sender, tx_body body);

}  // namespace vcsim::chainsim
