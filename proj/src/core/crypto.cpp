#include "vcsim/core/crypto.hpp"

namespace vcsim::core {

namespace {
digest keyed_digest(const actor_id& signer, const std::vector<std::uint8_t>& msg) {
    byte_writer w;
    encode(w, signer);
    w.u32(static_cast<std::uint32_t>(msg.size()));
    auto bytes = w.bytes();
    bytes.insert(bytes.end(), msg.begin(), msg.end());
    return fnv128(bytes);
}
}  // namespace

signature sign(const actor_id& signer, const std::vector<std::uint8_t>& msg) {
    return signature{signer, keyed_digest(signer, msg)};
}

bool verify(const signature& sig, const actor_id& expected_signer,
            const std::vector<std::uint8_t>& msg) {
    if (sig.signer != expected_signer) return false;
    return sig.payload_digest == keyed_digest(expected_signer, msg);
}

signature sign_announcement(const actor_id& signer, const channel_state& s) {
    return sign(signer, announcement_signing_bytes(s));
}

bool verify_announcement_sig(const signature& sig, const actor_id& expected_signer,
                             const channel_state& s) {
    return verify(sig, expected_signer, announcement_signing_bytes(s));
}

bool announcement_valid(const update_announcement& m, const actor_id& end_a,
                        const actor_id& end_b) {
    if (m.end_party_sigs.size() != 2) return false;
    const auto bytes = announcement_signing_bytes(m.state);
    bool has_a = false, has_b = false;
    for (const auto& sig : m.end_party_sigs) {
        if (verify(sig, end_a, bytes)) has_a = true;
        if (verify(sig, end_b, bytes)) has_b = true;
    }
    return has_a && has_b;
}

}  // namespace vcsim::core
