#pragma once

#include "vcsim/core/crypto.hpp"
#include "vcsim/core/types.hpp"

#include <span>

namespace vcsim::core {

// Quorum threshold for a committee tolerating f Byzantine wardens.
inline std::size_t quorum_threshold(std::uint32_t f) { return 2u * f + 1u; }
inline std::size_t committee_size(std::uint32_t f) { return 3u * f + 1u; }

// True iff the certificate carries >= 2f+1 valid signatures from distinct
// committee members over `announcement_digest`. Duplicate signers count once.
bool verify_quorum(const quorum_cert& cert, std::span<const actor_id> committee,
                   std::uint32_t f);

// Per-warden collateral for a channel of balance v: the smallest integer
// covering the v/f bound. Satisfies (f+1) * result > v. Rejects f = 0.
coins required_collateral(coins v, std::uint32_t f);

// Valid iff the same warden signed both sides and the conflicting announcement
// has a higher sequence number, or the same sequence number with a different
// state. Decidable from the proof alone.
bool validate_proof_of_fraud(const proof_of_fraud& pof);

enum class register_error {
    ok,
    balance_mismatch,       // s_1 balances do not sum to v
    no_leader,              // contract_info names no/unknown leader
    mismatched_preregister, // parties disagreed on the pre-register contents
    missing_signature,
};

// Builds TX_r with every main party's signature over identical contents.
// `committees` holds one committee per underlying channel; the union becomes
// C_V. Any disagreement between the parties' views aborts the register.
register_error make_register_tx(const std::vector<actor_id>& parties,
                                const std::vector<std::vector<actor_id>>& committees,
                                const channel_state& s1, coins v,
                                const contract_info& contracts, register_tx& out);

// A register is valid iff it carries a verifying signature from every listed
// main party over the same unsigned contents, and names exactly one leader.
bool register_tx_valid(const register_tx& tx);

}  // namespace vcsim::core
