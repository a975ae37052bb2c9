#pragma once

#include "vcsim/netsim/kernel.hpp"

namespace vcsim::actors {

using core::actor_id;
using core::coins;

enum class party_behavior : std::uint8_t {
    honest,
    offline,                 // stops emitting at a scheduled step
    double_state_colluder,   // splits update states across committees with a partner
    old_state_closer,        // closes with a configured old state, withholds proofs
    inconsistent_funder,     // proposes a virtual lock off by a configured delta
    collusive_intermediary,  // agrees to whatever closing request it receives
};

enum class party_role : std::uint8_t { end_party, intermediary };

struct party_config {
    actor_id id;
    party_role role = party_role::end_party;
    party_behavior behavior = party_behavior::honest;
    actor_id collude_partner;
    core::seq_no old_close_seq = 0;
    coins funder_delta = 0;
};

// The plan every main party knows before the open protocol runs: which
// channels exist, who is where on the path, and the intended initial state.
struct vc_plan {
    core::channel_id vc = 0;
    std::vector<actor_id> parties;  // end-to-end path order
    std::vector<std::vector<actor_id>> committees;
    core::contract_info contracts;
    std::vector<core::channel_id> pc_channels;  // parallel to contracts.contracts
    core::channel_state initial_state;          // balances keyed by the two ends
    coins balance = 0;
    std::uint32_t f = 1;
};

enum class close_mode : std::uint8_t { collaborative = 0, direct_unilateral = 1 };

enum class side_close_status : std::uint8_t {
    idle,
    requested,
    agreed,
    unwound,
    registered,
    proofs_sent,
    settled,
};

class party {
  public:
    party(party_config cfg) : cfg_(std::move(cfg)) {}

    const actor_id& id() const { return cfg_.id; }
    const party_config& config() const { return cfg_; }

    // Setup wiring.
    void add_pc_channel(core::channel_id ch, chainsim::contract_id contract, actor_id peer,
                        std::vector<actor_id> committee, std::uint32_t f,
                        const core::update_announcement& funding, coins fee_contribution);
    void add_deploy(chainsim::deploy_channel_body body) { deploys_.push_back(std::move(body)); }
    void set_vc_plan(vc_plan plan);

    void on_message(const netsim::envelope& env, netsim::context& ctx);

    // Report inputs: what this party can prove it agreed to.
    struct entitlement_view {
        coins fee_contributions = 0;
        // Latest committed (quorum-backed) payment channel states.
        std::vector<core::update_announcement> pc_states;
        // Highest both-signed virtual channel announcement this party signed.
        std::optional<core::update_announcement> vc_entitlement;
        bool vc_open = false;
    };
    entitlement_view entitlement() const;
    bool open_failed() const { return open_failed_; }
    const std::optional<core::update_announcement>& vc_highest_both_signed() const {
        return vc_ ? vc_->highest_both_signed : none_announcement_;
    }

  private:
    struct pending_pc_update {
        core::update_announcement m;
        proto::update_purpose purpose = proto::update_purpose::payment;
        std::set<actor_id> warden_sigs;
        bool broadcast = false;
    };

    struct pc_view {
        core::channel_id id = 0;
        chainsim::contract_id contract = 0;
        actor_id peer;
        std::vector<actor_id> committee;
        std::uint32_t f = 1;
        core::update_announcement committed;
        std::optional<pending_pc_update> pending;
        coins fee_contribution = 0;
        bool closed_onchain = false;
        bool expect_lock = false;
        bool expect_unlock = false;
        core::update_announcement expected_close_state;  // for unlock validation
        bool have_expected_close = false;
    };

    struct vc_pending_update {
        // Colluders may run two announcements with the same sequence number.
        std::vector<core::update_announcement> variants;
        std::vector<std::uint8_t> roles;  // split_role per variant
        // committee index -> variant index -> wardens that signed it
        std::map<std::size_t, std::map<std::size_t, std::set<actor_id>>> sigs;
        bool committed = false;
    };

    struct side_state {
        side_state() = default;
        side_state(chainsim::contract_id c, core::channel_id ch) : contract(c), pc(ch) {}
        chainsim::contract_id contract = 0;
        core::channel_id pc = 0;
        side_close_status status = side_close_status::idle;
        std::set<actor_id> publications_seen;
        std::vector<chainsim::publication_entry> publication_entries;
        bool proofs_submitted = false;
    };

    struct vc_view {
        vc_plan plan;
        bool wardens_confirmed = false;
        bool open = false;
        // per committee: acks received
        std::map<std::size_t, std::set<actor_id>> open_acks;
        std::map<actor_id, core::register_tx> preregisters;   // intermediary: drafts from ends
        std::map<actor_id, core::signature> intermediary_sigs;
        std::optional<core::signature> other_end_sig;
        std::optional<core::signature> other_end_s1_sig;
        std::optional<core::register_tx> tx_r;
        core::update_announcement committed;          // quorum from every committee
        std::optional<core::update_announcement> highest_both_signed;
        std::map<core::seq_no, core::update_announcement> history;  // every both-signed state
        std::optional<vc_pending_update> pending;
        // closing
        bool closing = false;
        bool close_reported = false;
        close_mode mode = close_mode::collaborative;
        std::map<chainsim::contract_id, side_state> sides;  // my adjacent contracts
        std::optional<core::update_announcement> my_close_request;
        std::map<actor_id, core::update_announcement> close_requests_seen;
        std::map<actor_id, bool> close_agreements;  // peer -> agreed
        std::optional<core::update_announcement> learned_settle_state;
        bool sequential_pending = false;  // intermediary: second side after first settles
    };

    bool silent() const { return offline_ || crashed_; }
    pc_view* pc_by_channel(core::channel_id ch);
    pc_view* pc_with_peer(const actor_id& peer);
    bool is_vc_end() const;
    actor_id other_end() const;
    std::vector<actor_id> my_vc_neighbors() const;

    void handle_control(const proto::control& c, netsim::context& ctx);
    void handle_block(const proto::block_notify& bn, netsim::context& ctx);

    // open protocol
    void start_open(netsim::context& ctx);
    void on_pre_register(const proto::pre_register& m, const actor_id& from,
                         netsim::context& ctx);
    void on_pre_register_reply(const proto::pre_register_reply& m, netsim::context& ctx);
    void on_register_share(const proto::register_share& m, const actor_id& from,
                           netsim::context& ctx);
    void maybe_assemble_register(netsim::context& ctx);
    void on_open_ack(const proto::open_ack& m, netsim::context& ctx);
    void start_virtual_lock(netsim::context& ctx);
    void maybe_open_complete(netsim::context& ctx);

    // channel updates
    void propose_pc_update(pc_view& pc, core::channel_state next,
                           proto::update_purpose purpose, netsim::context& ctx);
    void on_state_propose(const proto::state_propose& m, const actor_id& from,
                          netsim::context& ctx);
    void on_state_accept(const proto::state_accept& m, netsim::context& ctx);
    void on_state_refuse(const proto::state_refuse& m, netsim::context& ctx);
    void broadcast_pc_update(pc_view& pc, netsim::context& ctx);
    void broadcast_vc_variant(std::size_t variant_index, netsim::context& ctx);
    void on_update_sig(const proto::update_sig& m, netsim::context& ctx);
    void start_vc_update(coins amount, std::uint8_t kind, netsim::context& ctx);

    // closing
    void start_close(close_mode mode, netsim::context& ctx);
    void on_close_request(const proto::close_request& m, const actor_id& from,
                          netsim::context& ctx);
    void on_close_agree(const proto::close_agree& m, const actor_id& from,
                        netsim::context& ctx);
    void on_close_reject(const proto::close_reject& m, const actor_id& from,
                         netsim::context& ctx);
    void note_peer_agreement(const actor_id& who, const core::update_announcement& vs,
                             netsim::context& ctx);
    void intermediary_evaluate(netsim::context& ctx);
    void on_patience_expired(netsim::context& ctx);
    void begin_unilateral(chainsim::contract_id contract, netsim::context& ctx);
    void submit_proofs_for(side_state& side, netsim::context& ctx);
    void start_unwind_with(const actor_id& peer, const core::update_announcement& vs,
                           netsim::context& ctx);
    void on_settle_event(const chainsim::settle_event& ev, netsim::context& ctx);
    void start_pc_close(core::channel_id ch, bool force_unilateral, netsim::context& ctx);
    void maybe_report_close_done(netsim::context& ctx);

    core::update_announcement close_request_state() const;
    void archive_sig(const core::archived_warden_sig& sig);
    std::vector<core::proof_of_fraud> compute_proofs(const side_state& side) const;

    party_config cfg_;
    bool offline_ = false;
    bool crashed_ = false;
    bool open_failed_ = false;
    std::vector<chainsim::deploy_channel_body> deploys_;
    std::map<core::channel_id, pc_view> pcs_;
    std::optional<vc_view> vc_;
    // channel -> warden -> seq -> everything that warden signed at that seq
    std::map<core::channel_id,
             std::map<actor_id, std::map<core::seq_no, std::vector<core::archived_warden_sig>>>>
        archive_;
    std::optional<core::update_announcement> none_announcement_;
};

}  // namespace vcsim::actors
