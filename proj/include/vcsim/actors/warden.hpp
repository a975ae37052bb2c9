#pragma once

#include "vcsim/netsim/kernel.hpp"

namespace vcsim::actors {

using core::actor_id;

enum class warden_behavior : std::uint8_t {
    honest,
    stale_publisher,  // publishes the stored announcement at a configured sequence
    double_signer,    // signs conflicting announcements with the same sequence
    withholder,       // withholds signatures from a target and never publishes
    crash,            // stops at a scheduled step (driver-controlled)
};

struct warden_config {
    actor_id id;
    warden_behavior behavior = warden_behavior::honest;
    core::seq_no stale_seq = 0;
    actor_id withhold_target;
};

// One channel as the warden sees it: who must co-sign states, and which
// contracts this warden publishes to when that channel closes on-chain.
struct warden_channel {
    core::channel_id id = 0;
    std::vector<actor_id> signers;               // exactly two
    std::vector<chainsim::contract_id> contracts;  // contracts whose committee includes us
    bool is_vc = false;
    core::channel_id pc_of_contract = 0;  // for VC channels: unused
};

class warden {
  public:
    warden(warden_config cfg) : cfg_(std::move(cfg)) {}

    const actor_id& id() const { return cfg_.id; }
    warden_behavior behavior() const { return cfg_.behavior; }

    // Setup wiring (before the run starts).
    void add_pc_channel(core::channel_id ch, chainsim::contract_id contract,
                        std::vector<actor_id> parties,
                        const core::update_announcement& funding);
    void set_funding_tx_wanted(chainsim::contract_id contract) {
        pending_funding_.push_back(contract);
    }

    void on_message(const netsim::envelope& env, netsim::context& ctx);

    // Introspection for tests.
    const core::update_announcement* highest_signed(core::channel_id ch) const;
    bool has_published_for(chainsim::contract_id c) const { return published_.count(c) > 0; }

  private:
    struct store_entry {
        // All announcements this warden signed, by sequence. An honest warden
        // keeps at most one per sequence.
        std::map<core::seq_no, std::vector<core::update_announcement>> signed_by_seq;
        core::seq_no highest = 0;
        bool published_closing = false;
    };

    void handle_control(const proto::control& c, netsim::context& ctx);
    void handle_open_broadcast(const proto::open_broadcast& ob, netsim::context& ctx);
    void handle_update(const proto::update_msg& um, netsim::context& ctx);
    void handle_block(const proto::block_notify& bn, netsim::context& ctx);
    void publish_for(chainsim::contract_id contract, netsim::context& ctx);
    void record_signed(core::channel_id ch, const core::update_announcement& m);
    std::optional<core::signed_state_publication> make_publication(core::channel_id ch) const;

    warden_config cfg_;
    bool crashed_ = false;
    std::map<core::channel_id, warden_channel> channels_;
    std::map<core::channel_id, store_entry> store_;
    std::set<chainsim::contract_id> published_;
    std::map<chainsim::contract_id, core::channel_id> contract_pc_;
    std::map<chainsim::contract_id, core::channel_id> contract_vc_;
    std::vector<chainsim::contract_id> pending_funding_;
};

}  // namespace vcsim::actors
