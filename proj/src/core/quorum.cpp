#include "vcsim/core/quorum.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace vcsim::core {

bool verify_quorum(const quorum_cert& cert, std::span<const actor_id> committee,
                   std::uint32_t f) {
    std::set<actor_id> counted;
    byte_writer w;
    encode(w, cert.announcement_digest);
    const auto bytes = w.bytes();
    for (const auto& sig : cert.warden_sigs) {
        const bool member =
            std::find(committee.begin(), committee.end(), sig.signer) != committee.end();
        if (!member) continue;
        if (!verify(sig, sig.signer, bytes)) continue;
        counted.insert(sig.signer);
    }
    return counted.size() >= quorum_threshold(f);
}

coins required_collateral(coins v, std::uint32_t f) {
    if (f == 0) throw std::invalid_argument("required_collateral: f must be >= 1");
    if (v < 1) throw std::invalid_argument("required_collateral: v must be >= 1");
    return (v + static_cast<coins>(f) - 1) / static_cast<coins>(f);
}

bool validate_proof_of_fraud(const proof_of_fraud& pof) {
    const auto& pub = pof.published;
    const auto& conf = pof.conflicting;
    if (pub.warden != pof.accused) return false;
    if (conf.warden_sig.signer != pof.accused) return false;
    if (!verify_announcement_sig(pub.warden_sig, pof.accused, pub.announcement.state))
        return false;
    if (!verify_announcement_sig(conf.warden_sig, pof.accused, conf.announcement.state))
        return false;
    if (pub.announcement.state.id != conf.announcement.state.id) return false;
    const auto pub_seq = pub.announcement.state.seq;
    const auto conf_seq = conf.announcement.state.seq;
    if (conf_seq > pub_seq) return true;
    // Double-sign: same sequence number, different state value.
    return conf_seq == pub_seq && !(conf.announcement.state == pub.announcement.state);
}

register_error make_register_tx(const std::vector<actor_id>& parties,
                                const std::vector<std::vector<actor_id>>& committees,
                                const channel_state& s1, coins v,
                                const contract_info& contracts, register_tx& out) {
    if (s1.balance_total() != v) return register_error::balance_mismatch;
    if (std::find(contracts.contracts.begin(), contracts.contracts.end(), contracts.leader) ==
        contracts.contracts.end())
        return register_error::no_leader;

    register_tx tx;
    tx.parties = parties;
    tx.committees = committees;
    for (const auto& committee : committees)
        for (const auto& w : committee)
            if (std::find(tx.committee_union.begin(), tx.committee_union.end(), w) ==
                tx.committee_union.end())
                tx.committee_union.push_back(w);
    tx.initial_state = s1;
    tx.balance = v;
    tx.contracts = contracts;

    const auto bytes = register_signing_bytes(tx);
    for (const auto& p : parties) tx.party_sigs.push_back(sign(p, bytes));
    out = std::move(tx);
    return register_error::ok;
}

bool register_tx_valid(const register_tx& tx) {
    if (tx.parties.empty()) return false;
    if (tx.party_sigs.size() != tx.parties.size()) return false;
    if (std::find(tx.contracts.contracts.begin(), tx.contracts.contracts.end(),
                  tx.contracts.leader) == tx.contracts.contracts.end())
        return false;
    if (tx.initial_state.balance_total() != tx.balance) return false;
    const auto bytes = register_signing_bytes(tx);
    for (std::size_t i = 0; i < tx.parties.size(); ++i)
        if (!verify(tx.party_sigs[i], tx.parties[i], bytes)) return false;
    return true;
}

}  // namespace vcsim::core
