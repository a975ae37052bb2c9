#pragma once

#include "vcsim/chainsim/ledger.hpp"
#include "vcsim/core/types.hpp"

#include <variant>

namespace vcsim::proto {

using core::actor_id;

// ---- open (pre-register exchange, warden broadcast) ----
struct pre_register {
    core::register_tx draft;  // carries the sender's signature
};
struct pre_register_reply {
    core::register_tx draft;  // intermediary appended its signature
    actor_id intermediary;
};
struct register_share {
    core::register_tx draft;  // end parties exchange intermediary replies
    core::signature s1_sig;   // sender's signature over the initial state
};
struct open_broadcast {
    core::register_tx reg;
    core::update_announcement m1;  // both-signed initial state
};
struct open_ack {
    core::channel_id vc = 0;
    core::archived_warden_sig sig;
};

// ---- updates (payment channels and virtual channels) ----
enum class update_purpose : std::uint8_t { payment = 0, vc_lock = 1, vc_unlock = 2 };

// split_role: 0 = ordinary update; 1/2 = colluders' paired same-sequence
// states routed to different committees.
struct state_propose {
    core::channel_state state;
    core::signature sig;
    update_purpose purpose = update_purpose::payment;
    std::uint8_t split_role = 0;
};
struct state_accept {
    core::update_announcement m;  // both party signatures
    update_purpose purpose = update_purpose::payment;
    std::uint8_t split_role = 0;
};
struct state_refuse {
    core::channel_id channel = 0;
    core::seq_no seq = 0;
};
struct update_msg {
    core::update_announcement m;  // broadcast to wardens
};
struct update_sig {
    core::archived_warden_sig sig;  // warden's signature back to the parties
};

// ---- closing ----
struct close_request {
    core::channel_id vc = 0;
    core::update_announcement vs;
    bool has_vs = true;  // an intermediary may ask without stating a view
};
struct close_agree {
    core::channel_id vc = 0;
    core::update_announcement vs;
};
struct close_reject {
    core::channel_id vc = 0;
};

// ---- chain ----
struct chain_tx {
    chainsim::tx t;
};
struct block_notify {
    chainsim::block b;
    std::vector<chainsim::settle_event> settlements;
};

// ---- scenario control (driver -> actors) and progress notes (actors -> driver) ----
enum class ctl_kind : std::uint8_t {
    fund,
    open_vc,
    do_update,
    start_close,
    patience_expired,
    go_offline,
    crash,
    close_pc,
    close_pc_force,  // fall back to a unilateral channel close
    go_online,
};
struct control {
    ctl_kind kind = ctl_kind::fund;
    core::channel_id channel = 0;
    core::coins amount = 0;    // payment delta for updates
    std::uint8_t update_kind = 0;  // 0 plain, 1 split states, 2 withhold from last committee
    std::uint8_t close_mode = 0;
};

enum class note_kind : std::uint8_t {
    open_done,
    open_failed,
    update_done,
    close_done,
    settle_seen,
    funded,
};
struct note {
    note_kind kind = note_kind::open_done;
    core::channel_id channel = 0;
    core::seq_no seq = 0;
    bool ok = true;
};

using message =
    std::variant<pre_register, pre_register_reply, register_share, open_broadcast, open_ack,
                 state_propose, state_accept, state_refuse, update_msg, update_sig,
                 close_request, close_agree, close_reject, chain_tx, block_notify, control,
                 note>;

const char* message_kind(const message& m);

}  // namespace vcsim::proto
