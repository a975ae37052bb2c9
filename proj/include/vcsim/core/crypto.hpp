#pragma once

#include "vcsim/core/serialize.hpp"
#include "vcsim/core/types.hpp"

namespace vcsim::core {

// Simulated signatures. A signature binds (signer, message digest); verify
// recomputes the binding, so a signature verifies for exactly the signer and
// message it was produced over. Nothing in the engine ever constructs a
// signature on behalf of another actor, which is the simulation's stand-in
// for unforgeability.
signature sign(const actor_id& signer, const std::vector<std::uint8_t>& msg);
bool verify(const signature& sig, const actor_id& expected_signer,
            const std::vector<std::uint8_t>& msg);

template <class T>
signature sign_value(const actor_id& signer, const T& v) {
    return sign(signer, canonical_bytes(v));
}
template <class T>
bool verify_value(const signature& sig, const actor_id& expected_signer, const T& v) {
    return verify(sig, expected_signer, canonical_bytes(v));
}

// The bytes both end parties sign for an update: (s_i, i) — the state carries
// its own sequence number, so the state encoding is the signed payload.
inline std::vector<std::uint8_t> announcement_signing_bytes(const channel_state& s) {
    return canonical_bytes(s);
}

signature sign_announcement(const actor_id& signer, const channel_state& s);
bool verify_announcement_sig(const signature& sig, const actor_id& expected_signer,
                             const channel_state& s);

// Both end-party signatures verify over the same (state, seq).
bool announcement_valid(const update_announcement& m, const actor_id& end_a,
                        const actor_id& end_b);

}  // namespace vcsim::core
