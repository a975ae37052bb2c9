#pragma once

#include "vcsim/chainsim/tx.hpp"

namespace vcsim::chainsim {

// Pure unilateral-close settlement rules. The contract state machine and the
// game-tree payoff evaluation both go through this function, so the simulator
// and the closing-game analysis cannot drift apart.
//
// Rules, for a committee of 3f+1 wardens:
//  - publications proven fraudulent are excluded; the wardens'-state pool is
//    the first 2f+1 remaining publications in arrival order
//  - the candidate wardens' published state (WS) is the pool entry with the
//    highest sequence number, earliest arrival breaking ties
//  - x valid proofs with x <= f: close per WS; x >= f+1: the whole virtual
//    balance goes to the closer's counterparty
//  - each slashed warden forfeits its collateral to the proof submitter
//  - the pool members split the closing fee equally (fee_pot / (2f+1) each);
//    with fewer than 2f+1 eligible publishers the shortfall stays in escrow
struct settlement_input {
    std::uint32_t f = 1;
    coins warden_collateral = 0;
    coins fee_pot = 0;
    std::vector<publication_entry> publications;   // on-chain arrival order
    std::vector<actor_id> proven_fraud;            // wardens with a valid proof
};

struct settlement_result {
    bool decided = false;                          // pool reached 2f+1
    bool fraud_overflow = false;                   // x >= f+1
    std::size_t valid_proofs = 0;
    std::optional<core::update_announcement> ws;
    std::optional<core::update_announcement> pc_state;
    std::map<actor_id, coins> fee_payments;
    coins fee_paid_total = 0;
    bool fee_shortfall = false;
    std::vector<actor_id> slashed;                 // distinct
    coins slash_total = 0;
};

settlement_result evaluate_unilateral_close(const settlement_input& in);

// Splits a virtual-channel lock according to a final virtual state. `left`
// is the lock party nearer the first register party. Never moves more than
// the reserved amount.
struct vc_split {
    coins left = 0;
    coins right = 0;
};
vc_split split_lock(const core::lock_entry& lock, const core::update_announcement& ws,
                    const actor_id& left_end, const actor_id& left_party);

}  // namespace vcsim::chainsim
