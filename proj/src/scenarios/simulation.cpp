#include "vcsim/scenarios/simulation.hpp"

#include "vcsim/core/quorum.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <sstream>

namespace vcsim::scenarios {

namespace {

constexpr core::channel_id kVcChannel = 100;

std::string party_label(std::size_t index, std::size_t n) {
    if (n == 3) {
        const char* names[] = {"A", "I", "B"};
        return names[index];
    }
    std::string s(1, static_cast<char>('A' + index));
    return s;
}

std::string warden_label(std::size_t committee, std::size_t slot) {
    return "W" + std::to_string(committee) + "." + std::to_string(slot);
}

struct cast {
    std::vector<actor_id> parties;                     // path order
    std::vector<std::vector<actor_id>> committees;     // per channel
    std::vector<core::channel_id> channels;            // per hop
    std::vector<chainsim::contract_id> contracts;      // parallel
    core::contract_info contract_info;
    core::channel_state s1;
    std::map<core::channel_id, core::update_announcement> fundings;
};

cast build_cast(const scenario_config& cfg) {
    cast c;
    const std::size_t n = cfg.hops + 1;
    for (std::size_t i = 0; i < n; ++i)
        c.parties.push_back(core::make_party(static_cast<std::uint32_t>(i),
                                             party_label(i, n)));
    std::uint32_t warden_index = 1000;
    for (std::size_t i = 0; i < cfg.hops; ++i) {
        std::vector<actor_id> committee;
        for (std::size_t j = 0; j < core::committee_size(cfg.f); ++j)
            committee.push_back(core::make_warden(warden_index++, warden_label(i, j)));
        c.committees.push_back(std::move(committee));
        c.channels.push_back(static_cast<core::channel_id>(i + 1));
        c.contracts.push_back(static_cast<chainsim::contract_id>(i + 1));
    }
    c.contract_info.contracts = c.contracts;
    c.contract_info.leader = c.contracts.front();

    c.s1.id = kVcChannel;
    c.s1.seq = 1;
    c.s1.balances[c.parties.front()] = cfg.vc_left_share;
    c.s1.balances[c.parties.back()] = cfg.vc_balance - cfg.vc_left_share;
    return c;
}

}  // namespace

scenario_config multihop_variant(scenario_config cfg, std::uint32_t hops) {
    cfg.hops = hops;
    cfg.name += "_" + std::to_string(hops) + "hop";
    return cfg;
}

// Orchestrates one run: schedules funding, open, updates, the configured
// closing script and the final channel closes, driven by progress notes and
// block observations.
class scenario_driver {
  public:
    scenario_driver(const scenario_config& cfg, const cast& c, netsim::kernel& k,
                    chainsim::ledger& ledger)
        : cfg_(cfg), cast_(c), kernel_(k), ledger_(ledger) {}

    void kickoff() {
        for (std::size_t i = 0; i <= cfg_.hops; ++i) {
            // Offline behavior without a close-time switch means dark from
            // the start.
            auto it = cfg_.parties.find(i);
            if (it != cfg_.parties.end() &&
                it->second.behavior == actors::party_behavior::offline &&
                !it->second.offline_at_close)
                send_ctl(cast_.parties[i], proto::ctl_kind::go_offline);
        }
        for (const auto& p : cast_.parties) send_ctl(p, proto::ctl_kind::fund, 0, 1);
        ops_.push_back(op{"funding", true, false});
    }

    void on_message(const netsim::envelope& env, netsim::context& ctx);

    bool liveness_ok() const {
        return std::all_of(ops_.begin(), ops_.end(),
                           [](const op& o) { return !o.honest_initiator || o.done; });
    }
    bool open_aborted() const { return open_aborted_; }
    bool vc_opened() const { return open_done_.size() >= cast_.parties.size(); }

  private:
    struct op {
        std::string what;
        bool honest_initiator = true;
        bool done = false;
    };

    enum class phase : std::uint8_t { funding, opening, updating, closing, pc_closing, done };

    void send_ctl(const actor_id& to, proto::ctl_kind kind, core::channel_id ch = 0,
                  coins amount = 0, std::uint8_t update_kind = 0, std::uint8_t mode = 0,
                  netsim::step_no at = 0) {
        proto::control c;
        c.kind = kind;
        c.channel = ch;
        c.amount = amount;
        c.update_kind = update_kind;
        c.close_mode = mode;
        if (at == 0)
            kernel_.schedule_exact(netsim::driver_ep(), netsim::actor_ep(to), c,
                                   kernel_.now() + 1);
        else
            kernel_.schedule_exact(netsim::driver_ep(), netsim::actor_ep(to), c, at);
    }

    bool party_honest(std::size_t index) const {
        auto it = cfg_.parties.find(index);
        return it == cfg_.parties.end() ||
               it->second.behavior == actors::party_behavior::honest;
    }
    bool party_offline_at_close(std::size_t index) const {
        auto it = cfg_.parties.find(index);
        return it != cfg_.parties.end() && it->second.offline_at_close;
    }
    bool party_returns(std::size_t index) const {
        auto it = cfg_.parties.find(index);
        return it != cfg_.parties.end() && it->second.returns_later;
    }
    netsim::step_no patience() const {
        return cfg_.patience ? cfg_.patience : 3 * (cfg_.policy.horizon + 2) + 10;
    }

    void start_updates();
    void next_update();
    void start_close_phase();
    void start_second_wave();
    void start_pc_close_phase();
    void mark_op_done(const std::string& what);

    const scenario_config& cfg_;
    const cast& cast_;
    netsim::kernel& kernel_;
    chainsim::ledger& ledger_;

    phase phase_ = phase::funding;
    std::map<chainsim::contract_id, std::pair<std::size_t, std::size_t>> funded_;
    bool stage2_sent_ = false;
    std::set<actor_id> open_done_;
    bool open_aborted_ = false;
    std::size_t update_cursor_ = 0;
    std::set<actor_id> update_done_;
    std::set<actor_id> close_done_;
    std::set<actor_id> close_expected_;
    std::set<chainsim::contract_id> contracts_closed_;
    bool second_wave_started_ = false;
    bool pc_close_started_ = false;
    std::vector<op> ops_;

  public:
    const std::vector<op>& ops() const { return ops_; }
};

void scenario_driver::mark_op_done(const std::string& what) {
    for (auto& o : ops_)
        if (o.what == what && !o.done) {
            o.done = true;
            return;
        }
}

void scenario_driver::on_message(const netsim::envelope& env, netsim::context& ctx) {
    (void)ctx;
    if (const auto* bn = std::get_if<proto::block_notify>(&env.payload)) {
        for (const auto& at : bn->b.txs) {
            if (at.status != chainsim::apply_status::applied) continue;
            switch (at.transaction.kind) {
                case chainsim::tx_kind::deploy_channel:
                case chainsim::tx_kind::fund_party: {
                    chainsim::contract_id cid =
                        at.transaction.kind == chainsim::tx_kind::deploy_channel
                            ? std::get<chainsim::deploy_channel_body>(at.transaction.body)
                                  .contract
                            : std::get<chainsim::fund_party_body>(at.transaction.body).contract;
                    funded_[cid].first += 1;
                    break;
                }
                case chainsim::tx_kind::fund_warden:
                    funded_[std::get<chainsim::fund_warden_body>(at.transaction.body).contract]
                        .second += 1;
                    break;
                default:
                    break;
            }
        }
        for (const auto& ev : bn->settlements) {
            if (ev.penalty || true) contracts_closed_.insert(ev.contract);
        }
        // Second funding stage once every contract is deployed.
        if (phase_ == phase::funding && !stage2_sent_) {
            bool deployed = !cast_.contracts.empty();
            for (chainsim::contract_id cid : cast_.contracts) {
                auto it = funded_.find(cid);
                if (it == funded_.end() || it->second.first < 1) deployed = false;
            }
            if (deployed) {
                stage2_sent_ = true;
                for (const auto& p : cast_.parties) send_ctl(p, proto::ctl_kind::fund, 0, 2);
                for (const auto& committee : cast_.committees)
                    for (const auto& w : committee) send_ctl(w, proto::ctl_kind::fund, 0, 2);
            }
        }
        // Advance out of funding once every contract is fully financed.
        if (phase_ == phase::funding) {
            bool all = !cast_.contracts.empty();
            for (chainsim::contract_id cid : cast_.contracts) {
                auto it = funded_.find(cid);
                if (it == funded_.end() || it->second.first < 2 ||
                    it->second.second < core::committee_size(cfg_.f))
                    all = false;
            }
            if (all) {
                mark_op_done("funding");
                if (cfg_.skip_open) {
                    phase_ = phase::updating;
                    start_updates();
                } else {
                    phase_ = phase::opening;
                    ops_.push_back(op{"open", party_honest(0) || party_honest(cfg_.hops),
                                      false});
                    send_ctl(cast_.parties.front(), proto::ctl_kind::open_vc);
                    send_ctl(cast_.parties.back(), proto::ctl_kind::open_vc);
                }
            }
        }
        if (phase_ == phase::pc_closing) {
            bool all = true;
            for (chainsim::contract_id cid : cast_.contracts)
                if (!contracts_closed_.count(cid)) all = false;
            if (all) {
                mark_op_done("pc_close");
                phase_ = phase::done;
            }
        }
        return;
    }

    const auto* note = std::get_if<proto::note>(&env.payload);
    if (!note) return;
    const actor_id from = env.from.id;

    switch (note->kind) {
        case proto::note_kind::open_done: {
            open_done_.insert(from);
            if (phase_ == phase::opening && open_done_.size() == cast_.parties.size()) {
                mark_op_done("open");
                phase_ = phase::updating;
                start_updates();
            }
            return;
        }
        case proto::note_kind::open_failed: {
            // An honest refusal invalidates the open; the operation is
            // resolved, not stuck.
            open_aborted_ = true;
            mark_op_done("open");
            if (phase_ == phase::opening) start_pc_close_phase();
            return;
        }
        case proto::note_kind::update_done: {
            if (phase_ != phase::updating) return;
            update_done_.insert(from);
            const actor_id& a = cast_.parties.front();
            const actor_id& b = cast_.parties.back();
            if (update_done_.count(a) && update_done_.count(b)) {
                mark_op_done("update" + std::to_string(update_cursor_));
                next_update();
            }
            return;
        }
        case proto::note_kind::close_done: {
            close_done_.insert(from);
            if (phase_ == phase::closing) {
                bool all = true;
                for (const auto& p : close_expected_)
                    if (!close_done_.count(p)) all = false;
                if (all) {
                    mark_op_done("close");
                    bool wave2 = false;
                    for (std::size_t i = 0; i <= cfg_.hops; ++i)
                        if (party_returns(i)) wave2 = true;
                    if (wave2 && !second_wave_started_)
                        start_second_wave();
                    else
                        start_pc_close_phase();
                }
            }
            return;
        }
        default:
            return;
    }
}

void scenario_driver::start_updates() {
    update_cursor_ = 0;
    if (cfg_.updates.empty()) {
        phase_ = phase::closing;
        start_close_phase();
        return;
    }
    update_done_.clear();
    const auto& u = cfg_.updates[0];
    ops_.push_back(op{"update0", party_honest(u.initiator), false});
    send_ctl(cast_.parties[u.initiator], proto::ctl_kind::do_update,
             cfg_.skip_open ? cast_.channels[0] : 0, u.amount, u.kind);
}

void scenario_driver::next_update() {
    ++update_cursor_;
    if (update_cursor_ >= cfg_.updates.size()) {
        phase_ = phase::closing;
        start_close_phase();
        return;
    }
    update_done_.clear();
    const auto& u = cfg_.updates[update_cursor_];
    ops_.push_back(op{"update" + std::to_string(update_cursor_), party_honest(u.initiator),
                      false});
    send_ctl(cast_.parties[u.initiator], proto::ctl_kind::do_update,
             cfg_.skip_open ? cast_.channels[0] : 0, u.amount, u.kind);
}

void scenario_driver::start_close_phase() {
    if (cfg_.close == close_style::none || cfg_.skip_open || open_aborted_) {
        start_pc_close_phase();
        return;
    }
    const netsim::step_no t0 = kernel_.now() + 2;
    for (std::size_t i = 0; i <= cfg_.hops; ++i)
        if (party_offline_at_close(i))
            send_ctl(cast_.parties[i], proto::ctl_kind::go_offline, 0, 0, 0, 0, t0);
    for (const auto& [label, spec] : cfg_.wardens) {
        if (!spec.crash_at_close) continue;
        for (const auto& committee : cast_.committees)
            for (const auto& w : committee)
                if (w.label == label)
                    send_ctl(w, proto::ctl_kind::crash, 0, 0, 0, 0, t0);
    }

    close_expected_.clear();
    for (std::size_t i = 0; i <= cfg_.hops; ++i)
        if (!party_offline_at_close(i)) close_expected_.insert(cast_.parties[i]);

    const netsim::step_no t1 = t0 + 2;
    auto mode = static_cast<std::uint8_t>(actors::close_mode::collaborative);
    switch (cfg_.close) {
        case close_style::optimistic:
        case close_style::collab_fallback:
            ops_.push_back(op{"close", party_honest(cfg_.close_initiator), false});
            send_ctl(cast_.parties[cfg_.close_initiator], proto::ctl_kind::start_close, 0, 0,
                     0, mode, t1);
            break;
        case close_style::unilateral:
            ops_.push_back(op{"close", party_honest(cfg_.close_initiator), false});
            send_ctl(cast_.parties[cfg_.close_initiator], proto::ctl_kind::start_close, 0, 0,
                     0, static_cast<std::uint8_t>(actors::close_mode::direct_unilateral),
                     t1);
            // Only the initiator's own report matters here.
            close_expected_.clear();
            close_expected_.insert(cast_.parties[cfg_.close_initiator]);
            break;
        case close_style::simultaneous_unilateral:
            ops_.push_back(op{"close", party_honest(0) || party_honest(cfg_.hops), false});
            send_ctl(cast_.parties.front(), proto::ctl_kind::start_close, 0, 0, 0,
                     static_cast<std::uint8_t>(actors::close_mode::direct_unilateral), t1);
            send_ctl(cast_.parties.back(), proto::ctl_kind::start_close, 0, 0, 0,
                     static_cast<std::uint8_t>(actors::close_mode::direct_unilateral), t1);
            close_expected_.clear();
            close_expected_.insert(cast_.parties.front());
            close_expected_.insert(cast_.parties.back());
            break;
        case close_style::intermediary_direct:
            ops_.push_back(op{"close", party_honest(cfg_.close_initiator), false});
            send_ctl(cast_.parties[cfg_.close_initiator], proto::ctl_kind::start_close, 0, 0,
                     0, static_cast<std::uint8_t>(actors::close_mode::direct_unilateral),
                     t1);
            close_expected_.clear();
            close_expected_.insert(cast_.parties[cfg_.close_initiator]);
            break;
        case close_style::none:
            break;
    }
    // Patience nudges let collaborative attempts fall back to the chain.
    const netsim::step_no tp = t1 + patience();
    for (std::size_t i = 0; i <= cfg_.hops; ++i)
        if (!party_offline_at_close(i))
            send_ctl(cast_.parties[i], proto::ctl_kind::patience_expired, 0, 0, 0, 0, tp);
    // If notes never complete, move on late and let the report show it.
    kernel_.schedule_exact(netsim::driver_ep(), netsim::driver_ep(),
                           proto::note{proto::note_kind::close_done, 0, 0, false},
                           tp + 4 * patience());
}

void scenario_driver::start_second_wave() {
    second_wave_started_ = true;
    const netsim::step_no t0 = kernel_.now() + 2;
    std::vector<std::size_t> returning;
    for (std::size_t i = 0; i <= cfg_.hops; ++i)
        if (party_returns(i)) {
            returning.push_back(i);
            send_ctl(cast_.parties[i], proto::ctl_kind::go_online, 0, 0, 0, 0, t0);
        }
    // A returning end drives the leftover side; otherwise the intermediary.
    std::size_t initiator = returning.front();
    for (std::size_t i : returning)
        if (i == 0 || i == cfg_.hops) initiator = i;
    close_expected_.clear();
    for (std::size_t i : returning) close_expected_.insert(cast_.parties[i]);
    ops_.push_back(op{"close", party_honest(initiator), false});
    send_ctl(cast_.parties[initiator], proto::ctl_kind::start_close, 0, 0, 0,
             static_cast<std::uint8_t>(actors::close_mode::collaborative), t0 + 2);
    const netsim::step_no tp = t0 + 2 + patience();
    for (std::size_t i : returning)
        send_ctl(cast_.parties[i], proto::ctl_kind::patience_expired, 0, 0, 0, 0, tp);
}

void scenario_driver::start_pc_close_phase() {
    if (pc_close_started_) return;
    pc_close_started_ = true;
    phase_ = phase::pc_closing;
    if (!cfg_.pc_close_at_end) {
        phase_ = phase::done;
        return;
    }
    ops_.push_back(op{"pc_close", true, false});
    const netsim::step_no t0 = kernel_.now() + 2;
    for (std::size_t i = 0; i < cast_.channels.size(); ++i) {
        if (contracts_closed_.count(cast_.contracts[i])) continue;
        const std::size_t left = i;
        const std::size_t right = i + 1;
        const bool left_up = !party_offline_at_close(left) || party_returns(left);
        const bool right_up = !party_offline_at_close(right) || party_returns(right);
        if (cfg_.pessimistic_pc_close) {
            if (left_up)
                send_ctl(cast_.parties[left], proto::ctl_kind::close_pc_force,
                         cast_.channels[i], 0, 0, 0, t0);
            continue;
        }
        if (left_up)
            send_ctl(cast_.parties[left], proto::ctl_kind::close_pc, cast_.channels[i], 0,
                     0, 0, t0);
        if (right_up)
            send_ctl(cast_.parties[right], proto::ctl_kind::close_pc, cast_.channels[i], 0,
                     0, 0, t0);
        // Unilateral fallback if the pair cannot complete collaboratively.
        const netsim::step_no tp = t0 + patience();
        if (left_up)
            send_ctl(cast_.parties[left], proto::ctl_kind::close_pc_force, cast_.channels[i],
                     0, 0, 0, tp);
        else if (right_up)
            send_ctl(cast_.parties[right], proto::ctl_kind::close_pc_force, cast_.channels[i],
                     0, 0, 0, tp);
    }
}

// ----------------------------------------------------------------- run ----

execution_report run_scenario(const scenario_config& cfg) {
    cast c = build_cast(cfg);
    const std::size_t n = cfg.hops + 1;

    netsim::adversary_policy policy = cfg.policy;
    if (policy.seed == 0) policy.seed = cfg.seed;
    netsim::kernel kernel(policy);
    chainsim::ledger ledger;
    ledger.set_disable_crosscheck(cfg.disable_crosscheck);

    // --- build actors
    std::vector<std::unique_ptr<actors::party>> parties;
    std::map<actor_id, std::unique_ptr<actors::warden>> wardens;

    for (std::size_t i = 0; i < n; ++i) {
        actors::party_config pc;
        pc.id = c.parties[i];
        pc.role = (i == 0 || i + 1 == n) ? actors::party_role::end_party
                                         : actors::party_role::intermediary;
        if (auto it = cfg.parties.find(i); it != cfg.parties.end()) {
            pc.behavior = it->second.behavior;
            pc.collude_partner = it->second.collude_partner;
            pc.old_close_seq = it->second.old_close_seq;
            pc.funder_delta = it->second.funder_delta;
        }
        parties.push_back(std::make_unique<actors::party>(pc));
        if (pc.behavior != actors::party_behavior::honest)
            kernel.mark_byzantine(pc.id);
    }
    for (std::size_t i = 0; i < cfg.hops; ++i) {
        for (const auto& w : c.committees[i]) {
            actors::warden_config wc;
            wc.id = w;
            if (auto it = cfg.wardens.find(w.label); it != cfg.wardens.end()) {
                wc.behavior = it->second.behavior;
                wc.stale_seq = it->second.stale_seq;
                if (it->second.behavior == actors::warden_behavior::withholder)
                    wc.withhold_target = c.parties[it->second.withhold_target_party];
            }
            wardens[w] = std::make_unique<actors::warden>(wc);
            if (wc.behavior != actors::warden_behavior::honest) kernel.mark_byzantine(w);
        }
    }

    // --- channels, deposits, genesis
    const coins left_share = cfg.vc_left_share;
    const coins right_share = cfg.vc_balance - cfg.vc_left_share;
    const coins collateral =
        core::required_collateral(left_share + right_share + 2 * cfg.deposit_slack, cfg.f);
    core::coins genesis_total = 0;
    std::map<actor_id, coins> genesis;

    for (std::size_t i = 0; i < cfg.hops; ++i) {
        const actor_id& left = c.parties[i];
        const actor_id& right = c.parties[i + 1];
        chainsim::deploy_channel_body dep;
        dep.contract = c.contracts[i];
        dep.pc_channel = c.channels[i];
        dep.parties = {left, right};
        dep.deposits[left] = left_share + cfg.deposit_slack;
        dep.deposits[right] = right_share + cfg.deposit_slack;
        dep.committee = c.committees[i];
        dep.f = cfg.f;
        dep.collateral_per_warden = collateral;
        dep.fee_contributions[left] = cfg.closing_fee - cfg.closing_fee / 2;
        dep.fee_contributions[right] = cfg.closing_fee / 2;

        core::update_announcement funding;
        funding.state.id = c.channels[i];
        funding.state.seq = 1;
        funding.state.balances = dep.deposits;
        funding.end_party_sigs = {core::sign_announcement(left, funding.state),
                                  core::sign_announcement(right, funding.state)};
        c.fundings[c.channels[i]] = funding;

        parties[i]->add_deploy(dep);
        parties[i]->add_pc_channel(c.channels[i], c.contracts[i], right, c.committees[i],
                                   cfg.f, funding, dep.fee_contributions[left]);
        parties[i + 1]->add_pc_channel(c.channels[i], c.contracts[i], left, c.committees[i],
                                       cfg.f, funding, dep.fee_contributions[right]);
        for (const auto& w : c.committees[i]) {
            wardens[w]->add_pc_channel(c.channels[i], c.contracts[i], {left, right}, funding);
            wardens[w]->set_funding_tx_wanted(c.contracts[i]);
            genesis[w] += collateral;
        }
        genesis[left] += dep.deposits[left] + dep.fee_contributions[left];
        genesis[right] += dep.deposits[right] + dep.fee_contributions[right];
    }
    for (const auto& [who, amount] : genesis) {
        ledger.credit_external(who, amount);
        genesis_total += amount;
    }

    if (!cfg.skip_open) {
        actors::vc_plan plan;
        plan.vc = kVcChannel;
        plan.parties = c.parties;
        plan.committees = c.committees;
        plan.contracts = c.contract_info;
        plan.pc_channels = c.channels;
        plan.initial_state = c.s1;
        plan.balance = cfg.vc_balance;
        plan.f = cfg.f;
        for (auto& p : parties) p->set_vc_plan(plan);
    }

    // --- wire the network
    scenario_driver driver(cfg, c, kernel, ledger);
    for (auto& p : parties) {
        actors::party* raw = p.get();
        kernel.register_handler(netsim::actor_ep(raw->id()),
                                [raw](const netsim::envelope& env, netsim::context& ctx) {
                                    raw->on_message(env, ctx);
                                });
    }
    for (auto& [id, w] : wardens) {
        actors::warden* raw = w.get();
        kernel.register_handler(netsim::actor_ep(id),
                                [raw](const netsim::envelope& env, netsim::context& ctx) {
                                    raw->on_message(env, ctx);
                                });
    }
    kernel.register_handler(netsim::driver_ep(),
                            [&driver](const netsim::envelope& env, netsim::context& ctx) {
                                driver.on_message(env, ctx);
                            });

    // Blockchain endpoint: transactions delivered here enter the next block.
    std::vector<chainsim::tx> pending;
    std::vector<std::string> violations;
    std::map<chainsim::contract_id, core::seq_no> ws_seq_seen;
    std::set<chainsim::contract_id> penalized;
    std::vector<chainsim::cross_check_body> staged_crosschecks;
    bool staging_active = cfg.force_simultaneous_crosscheck;

    kernel.register_handler(netsim::blockchain_ep(),
                            [&pending](const netsim::envelope& env, netsim::context&) {
                                if (const auto* t = std::get_if<proto::chain_tx>(&env.payload))
                                    pending.push_back(t->t);
                            });

    auto broadcast_block = [&](netsim::context& ctx, const chainsim::block& b,
                               const std::vector<chainsim::settle_event>& settlements) {
        proto::block_notify bn{b, settlements};
        for (const auto& p : c.parties) ctx.send(netsim::actor_ep(p), bn);
        for (const auto& committee : c.committees)
            for (const auto& w : committee) ctx.send(netsim::actor_ep(w), bn);
        ctx.send(netsim::driver_ep(), bn);
    };

    kernel.set_end_of_step_hook(
        netsim::blockchain_ep(), [&](netsim::context& ctx) {
            const bool queue_dry = !kernel.pending();
            if (pending.empty() && staging_active && queue_dry &&
                !staged_crosschecks.empty()) {
                // Nothing else in flight: release the held notifications so
                // they land in one block, the worst-case simultaneous arrival.
                for (const auto& e : staged_crosschecks)
                    pending.push_back(chainsim::make_contract_tx(chainsim::tx_kind::cross_check,
                                                                 e.from, e));
                staged_crosschecks.clear();
                staging_active = false;
            }
            if (pending.empty()) return;
            auto result = ledger.mine_block(std::move(pending));
            pending.clear();

            if (ledger.total_coins() != genesis_total)
                violations.push_back("conservation breach at block " +
                                     std::to_string(result.mined.height));
            for (const auto& ev : result.settlements)
                if (ev.penalty) penalized.insert(ev.contract);
            for (const auto& [cid, contract] : ledger.contracts()) {
                if (!contract.decided_ws()) continue;
                const auto seq = contract.decided_ws()->state.seq;
                auto it = ws_seq_seen.find(cid);
                if (it != ws_seq_seen.end() && seq < it->second)
                    violations.push_back("ws sequence decreased at contract " +
                                         std::to_string(cid));
                ws_seq_seen[cid] = seq;
            }

            for (const auto& e : result.emissions) {
                const bool is_query = !e.is_reply && e.ws.has_value();
                if (staging_active && is_query) {
                    staged_crosschecks.push_back(e);
                    std::set<chainsim::contract_id> senders;
                    for (const auto& s : staged_crosschecks) senders.insert(s.from);
                    if (senders.size() >= 2) {
                        for (const auto& s : staged_crosschecks)
                            pending.push_back(chainsim::make_contract_tx(
                                chainsim::tx_kind::cross_check, s.from, s));
                        staged_crosschecks.clear();
                        staging_active = false;
                    }
                    continue;
                }
                ctx.send(netsim::blockchain_ep(),
                         proto::chain_tx{chainsim::make_contract_tx(
                             chainsim::tx_kind::cross_check, e.from, e)});
            }
            broadcast_block(ctx, result.mined, result.settlements);
        });

    // --- run
    driver.kickoff();
    const netsim::step_no max_steps =
        cfg.max_steps ? cfg.max_steps : 400 * (policy.horizon + 2) + 20000;
    const bool completed = kernel.run_until_quiescent(max_steps);

    // --- report
    execution_report r;
    r.scenario = cfg.name;
    r.seed = cfg.seed;
    r.completed = completed;
    r.genesis = genesis;
    r.violations = violations;
    r.trace_digest = kernel.trace_digest();
    if (std::getenv("VCSIM_TRACE")) r.trace_text = kernel.trace_text();
    r.steps = kernel.now();
    r.blocks = ledger.blocks().size();
    r.vc_opened = driver.vc_opened();
    r.open_aborted = driver.open_aborted();

    r.all_closed = true;
    for (chainsim::contract_id cid : c.contracts) {
        const auto* contract = ledger.find_contract(cid);
        if (!contract) {
            r.all_closed = false;
            continue;
        }
        contract_outcome oc;
        oc.id = cid;
        oc.phase = contract->phase();
        oc.applied_ws = contract->applied_ws();
        oc.penalty = penalized.count(cid) > 0;
        oc.fraud_overflow = contract->settled_by_fraud_overflow();
        oc.fee_shortfall = contract->fee_shortfall();
        oc.publications = contract->publications().size();
        oc.valid_proofs = contract->valid_proof_count();
        r.contracts.push_back(oc);
        if (contract->phase() != chainsim::contract_phase::pc_closed) r.all_closed = false;
    }

    // On-chain transaction counters, grouped by phase and sender class.
    for (const auto& b : ledger.blocks()) {
        for (const auto& at : b.txs) {
            const auto phase = classify_tx(at.transaction);
            if (at.transaction.sender.is_contract) continue;
            auto& counts = r.counters[phase];
            if (at.transaction.sender.actor.kind == core::actor_kind::main_party)
                counts.party_txs += 1;
            else
                counts.warden_txs += 1;
        }
    }

    // Final holdings: external coins plus whatever escrow a still-open
    // contract holds for the actor.
    r.final_holdings = ledger.external_balances();
    for (const auto& [cid, contract] : ledger.contracts()) {
        if (contract.phase() == chainsim::contract_phase::pc_closed) continue;
        for (const auto& p : contract.parties())
            r.final_holdings[p] += contract.deposit_held(p) + contract.fee_held(p);
        for (const auto& slot : contract.warden_slots())
            r.final_holdings[slot.id] += slot.collateral;
    }

    // Entitlements: engine-independent, from the actors' own signed-state
    // archives.
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = parties[i];
        const bool honest = !cfg.parties.count(i) ||
                            cfg.parties.at(i).behavior == actors::party_behavior::honest;
        if (honest) r.honest.insert(p->id());
        auto ev = p->entitlement();
        coins entitled = genesis[p->id()] - ev.fee_contributions;
        for (const auto& state : ev.pc_states) {
            const auto* contract = ledger.find_contract(0);
            (void)contract;
            coins deposit = 0;
            for (const auto& [cid2, con] : ledger.contracts())
                if (con.funding_state().id == state.state.id)
                    deposit = con.funding_state().balances.count(p->id())
                                  ? con.funding_state().balances.at(p->id())
                                  : 0;
            entitled -= deposit;
            auto bal = state.state.balances.find(p->id());
            entitled += bal == state.state.balances.end() ? 0 : bal->second;
            for (const auto& lock : state.state.locks) {
                if (ev.vc_entitlement && lock.vc_id == kVcChannel &&
                    (p->id() == c.parties.front() || p->id() == c.parties.back())) {
                    auto share = ev.vc_entitlement->state.balances.find(p->id());
                    entitled += share == ev.vc_entitlement->state.balances.end()
                                    ? 0
                                    : share->second;
                } else if (auto amt = lock.amounts.find(p->id()); amt != lock.amounts.end()) {
                    entitled += amt->second;
                }
            }
        }
        r.entitled[p->id()] = entitled;
    }
    for (const auto& committee : c.committees) {
        for (const auto& w : committee) {
            const bool honest = !cfg.wardens.count(w.label) ||
                                cfg.wardens.at(w.label).behavior ==
                                    actors::warden_behavior::honest;
            if (honest) r.honest.insert(w);
            r.entitled[w] = genesis[w];
        }
    }
    for (const auto& [who, want] : r.entitled) {
        const coins got =
            r.final_holdings.count(who) ? r.final_holdings.at(who) : 0;
        if (got < want) r.losses[who] = want - got;
    }

    r.liveness = completed && driver.liveness_ok();
    return r;
}

}  // namespace vcsim::scenarios
