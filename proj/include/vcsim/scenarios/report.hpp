#pragma once

#include "vcsim/chainsim/ledger.hpp"

#include <set>
#include <string>

namespace vcsim::scenarios {

using core::actor_id;
using core::coins;

enum class tx_phase : std::uint8_t { setup, vc_close, pc_close, other };

// Which Table-style phase a transaction belongs to, derived from its kind and
// contents (publications carrying a virtual state belong to the virtual-channel
// close; bare channel publications to the payment-channel close).
tx_phase classify_tx(const chainsim::tx& t);

struct contract_outcome {
    chainsim::contract_id id = 0;
    chainsim::contract_phase phase = chainsim::contract_phase::open;
    std::optional<core::update_announcement> applied_ws;
    bool penalty = false;
    bool fraud_overflow = false;
    bool fee_shortfall = false;
    std::size_t publications = 0;
    std::size_t valid_proofs = 0;
};

struct tx_counts {
    std::size_t party_txs = 0;
    std::size_t warden_txs = 0;
};

struct execution_report {
    std::string scenario;
    std::uint64_t seed = 0;
    bool completed = true;   // queue drained without the liveness flag
    bool all_closed = false; // every contract reached pc_closed
    bool liveness = true;    // every honest-initiated operation resolved
    bool vc_opened = false;
    bool open_aborted = false;

    std::map<actor_id, coins> genesis;
    std::map<actor_id, coins> final_holdings;   // external + escrow still held
    std::map<actor_id, coins> entitled;
    std::map<actor_id, coins> losses;           // entitled - final, when positive
    std::set<actor_id> honest;

    std::vector<contract_outcome> contracts;
    std::map<tx_phase, tx_counts> counters;
    std::vector<std::string> violations;        // conservation or invariant breaches
    std::uint64_t trace_digest = 0;
    std::string trace_text;  // filled when VCSIM_TRACE is set
    std::uint64_t steps = 0;
    std::uint64_t blocks = 0;

    std::string summary() const;
};

// Definition-style checks over a finished run.
bool check_balance_security(const execution_report& r);
bool check_liveness(const execution_report& r);
tx_counts count_onchain_txs(const execution_report& r, tx_phase phase);

// Same-state closure: every pair of contracts of the virtual channel that
// applied a wardens' state applied the identical (seq, balances).
bool check_same_state_closure(const execution_report& r);

}  // namespace vcsim::scenarios
