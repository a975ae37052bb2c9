#include "vcsim/core/serialize.hpp"

namespace vcsim::core {

digest fnv128(const std::vector<std::uint8_t>& bytes) {
    // Two independent 64-bit FNV-1a streams; enough for a simulation digest.
    std::uint64_t a = 0xcbf29ce484222325ull;
    std::uint64_t b = 0xaf63bd4c8601b7dfull;
    for (std::uint8_t c : bytes) {
        a = (a ^ c) * 0x100000001b3ull;
        b = (b ^ (c ^ 0x5a)) * 0x100000001b3ull;
    }
    return digest{a, b};
}

void encode(byte_writer& w, const actor_id& a) {
    w.u8(static_cast<std::uint8_t>(a.kind));
    w.u32(a.index);
}

void encode(byte_writer& w, const digest& d) {
    w.u64(d.lo);
    w.u64(d.hi);
}

void encode(byte_writer& w, const signature& s) {
    encode(w, s.signer);
    encode(w, s.payload_digest);
}

void encode(byte_writer& w, const lock_entry& l) {
    w.u32(l.vc_id);
    w.u32(static_cast<std::uint32_t>(l.amounts.size()));
    for (const auto& [who, amt] : l.amounts) {
        encode(w, who);
        w.i64(amt);
    }
}

void encode(byte_writer& w, const channel_state& s) {
    w.u32(s.id);
    w.u64(s.seq);
    w.u32(static_cast<std::uint32_t>(s.balances.size()));
    for (const auto& [who, amt] : s.balances) {
        encode(w, who);
        w.i64(amt);
    }
    w.u32(static_cast<std::uint32_t>(s.locks.size()));
    for (const auto& l : s.locks) encode(w, l);
}

void encode(byte_writer& w, const update_announcement& m) {
    encode(w, m.state);
    w.u32(static_cast<std::uint32_t>(m.end_party_sigs.size()));
    for (const auto& s : m.end_party_sigs) encode(w, s);
}

void encode(byte_writer& w, const signed_state_publication& p) {
    encode(w, p.warden);
    encode(w, p.announcement);
    encode(w, p.warden_sig);
}

void encode(byte_writer& w, const contract_info& ci) {
    w.u32(static_cast<std::uint32_t>(ci.contracts.size()));
    for (contract_id c : ci.contracts) w.u32(c);
    w.u32(ci.leader);
}

void encode(byte_writer& w, const register_tx& tx) {
    w.u32(static_cast<std::uint32_t>(tx.parties.size()));
    for (const auto& p : tx.parties) encode(w, p);
    w.u32(static_cast<std::uint32_t>(tx.committee_union.size()));
    for (const auto& p : tx.committee_union) encode(w, p);
    w.u32(static_cast<std::uint32_t>(tx.committees.size()));
    for (const auto& c : tx.committees) {
        w.u32(static_cast<std::uint32_t>(c.size()));
        for (const auto& p : c) encode(w, p);
    }
    encode(w, tx.initial_state);
    w.i64(tx.balance);
    encode(w, tx.contracts);
    w.u32(static_cast<std::uint32_t>(tx.party_sigs.size()));
    for (const auto& s : tx.party_sigs) encode(w, s);
}

std::vector<std::uint8_t> register_signing_bytes(const register_tx& tx) {
    register_tx unsigned_copy = tx;
    unsigned_copy.party_sigs.clear();
    return canonical_bytes(unsigned_copy);
}

}  // namespace vcsim::core
