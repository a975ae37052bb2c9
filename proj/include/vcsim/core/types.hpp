#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vcsim::core {

// Coins are non-negative integers; conservation checks are exact.
using coins = std::int64_t;

enum class actor_kind : std::uint8_t { main_party = 0, warden = 1 };

struct actor_id {
    actor_kind kind = actor_kind::main_party;
    std::uint32_t index = 0;
    std::string label;

    friend bool operator==(const actor_id& a, const actor_id& b) {
        return a.kind == b.kind && a.index == b.index;
    }
    friend bool operator!=(const actor_id& a, const actor_id& b) { return !(a == b); }
    friend bool operator<(const actor_id& a, const actor_id& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.index < b.index;
    }
};

inline actor_id make_party(std::uint32_t index, std::string label) {
    return actor_id{actor_kind::main_party, index, std::move(label)};
}
inline actor_id make_warden(std::uint32_t index, std::string label) {
    return actor_id{actor_kind::warden, index, std::move(label)};
}

using channel_id = std::uint32_t;
using contract_id = std::uint32_t;
using seq_no = std::uint64_t;

// 128-bit digest of a canonical byte string.
struct digest {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    friend bool operator==(const digest&, const digest&) = default;
    friend bool operator<(const digest& a, const digest& b) {
        return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
    }
};

struct signature {
    actor_id signer;
    digest payload_digest;
    friend bool operator==(const signature& a, const signature& b) {
        return a.signer == b.signer && a.payload_digest == b.payload_digest;
    }
};

// A channel lock reserving coins of an underlying channel for a virtual one.
// `amounts` is keyed by the underlying channel's own parties.
struct lock_entry {
    channel_id vc_id = 0;
    std::map<actor_id, coins> amounts;
    friend bool operator==(const lock_entry&, const lock_entry&) = default;

    coins total() const {
        coins t = 0;
        for (const auto& [_, c] : amounts) t += c;
        return t;
    }
};

struct channel_state {
    channel_id id = 0;
    seq_no seq = 1;
    std::map<actor_id, coins> balances;
    std::vector<lock_entry> locks;  // empty for virtual channel states

    friend bool operator==(const channel_state&, const channel_state&) = default;

    coins balance_total() const {
        coins t = 0;
        for (const auto& [_, c] : balances) t += c;
        return t;
    }
    coins locked_total() const {
        coins t = 0;
        for (const auto& l : locks) t += l.total();
        return t;
    }
    const lock_entry* find_lock(channel_id vc) const {
        for (const auto& l : locks)
            if (l.vc_id == vc) return &l;
        return nullptr;
    }
};

// M = {s_i, i, sig_A(s_i,i), sig_B(s_i,i)}: a state co-signed by both end parties.
struct update_announcement {
    channel_state state;
    std::vector<signature> end_party_sigs;
    friend bool operator==(const update_announcement&, const update_announcement&) = default;
};

struct quorum_cert {
    digest announcement_digest;
    std::vector<signature> warden_sigs;
    std::uint32_t committee_id = 0;
};

// {VS, sig_W(VS)}: what a warden puts on-chain during a unilateral close.
struct signed_state_publication {
    actor_id warden;
    update_announcement announcement;
    signature warden_sig;
    friend bool operator==(const signed_state_publication&, const signed_state_publication&) = default;
};

// A warden signature over an announcement, kept by the parties as proof material.
struct archived_warden_sig {
    update_announcement announcement;
    signature warden_sig;
    friend bool operator==(const archived_warden_sig&, const archived_warden_sig&) = default;
};

struct proof_of_fraud {
    actor_id accused;
    signed_state_publication published;
    archived_warden_sig conflicting;
};

struct contract_info {
    std::vector<contract_id> contracts;
    contract_id leader = 0;
    friend bool operator==(const contract_info&, const contract_info&) = default;
};

// TX_r: the register transaction all main parties sign at open.
struct register_tx {
    std::vector<actor_id> parties;             // ordered main parties, end-to-end
    std::vector<actor_id> committee_union;     // C_V
    std::vector<std::vector<actor_id>> committees;  // one per underlying channel
    channel_state initial_state;
    coins balance = 0;
    contract_info contracts;
    std::vector<signature> party_sigs;         // one per main party, same order
};

}  // namespace vcsim::core
