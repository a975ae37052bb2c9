#include "vcsim/netsim/kernel.hpp"

#include "vcsim/core/serialize.hpp"

#include <sstream>

namespace vcsim::proto {

const char* message_kind(const message& m) {
    static const char* names[] = {
        "pre_register", "pre_register_reply", "register_share", "open_broadcast", "open_ack",
        "state_propose", "state_accept",      "state_refuse",   "update_msg",     "update_sig",
        "close_request", "close_agree",       "close_reject",   "chain_tx",       "block_notify",
        "control",       "note"};
    return names[m.index()];
}

}  // namespace vcsim::proto

namespace vcsim::netsim {

std::string endpoint::name() const {
    switch (kind) {
        case endpoint_kind::blockchain: return "chain";
        case endpoint_kind::driver: return "driver";
        case endpoint_kind::actor: return id.label.empty() ? "actor" : id.label;
    }
    return "?";
}

void context::send(const endpoint& to, proto::message m) {
    kernel_.send(self_, to, std::move(m));
}

void context::log(const std::string& text) {
    kernel_.note_trace("decision", self_.name(), "-", text);
}

kernel::kernel(adversary_policy policy) : policy_(std::move(policy)) {
    rng_state_ = policy_.seed ? policy_.seed : 0x9e3779b97f4a7c15ull;
    if (policy_.jitter == 0) policy_.jitter = 1;
    if (policy_.jitter > policy_.horizon) policy_.jitter = policy_.horizon;
}

void kernel::register_handler(const endpoint& ep, handler h) {
    handlers_[ep] = std::move(h);
}

void kernel::set_end_of_step_hook(const endpoint& ep, end_of_step_hook h) {
    eos_hooks_.emplace_back(ep, std::move(h));
}

std::uint64_t kernel::next_rand() {
    // splitmix64: platform-independent, reproducible.
    rng_state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = rng_state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

step_no kernel::pick_delay(const envelope& env, bool& drop) {
    drop = false;
    const char* kind = proto::message_kind(env.payload);
    if (!env.honest_origin) {
        for (const auto& r : policy_.drops) {
            if (!(env.from.kind == endpoint_kind::actor && env.from.id == r.from)) continue;
            if (!r.kind.empty() && r.kind != kind) continue;
            drop = true;
            return 0;
        }
    }
    for (const auto& r : policy_.censorship) {
        if (!r.kind.empty() && r.kind != kind) continue;
        if (r.from && !(env.from.kind == endpoint_kind::actor && env.from.id == *r.from))
            continue;
        if (r.to && !(env.to.kind == endpoint_kind::actor && env.to.id == *r.to)) continue;
        return std::min<step_no>(std::max<step_no>(r.delay, 1), policy_.horizon);
    }
    return 1 + next_rand() % policy_.jitter;
}

void kernel::send(const endpoint& from, const endpoint& to, proto::message m) {
    envelope env;
    env.from = from;
    env.to = to;
    env.payload = std::move(m);
    env.sent_at = now_;
    env.seq = ++send_seq_;
    env.honest_origin = !(from.kind == endpoint_kind::actor && byzantine_.count(from.id));
    bool drop = false;
    const step_no delay = pick_delay(env, drop);
    if (drop) {
        ++dropped_;
        note_trace("drop", env.from.name(), env.to.name(), proto::message_kind(env.payload));
        return;
    }
    env.deliver_at = now_ + delay;
    queue_.insert(std::move(env));
}

void kernel::schedule_exact(const endpoint& from, const endpoint& to, proto::message m,
                            step_no deliver_at) {
    envelope env;
    env.from = from;
    env.to = to;
    env.payload = std::move(m);
    env.sent_at = now_;
    env.deliver_at = deliver_at > now_ ? deliver_at : now_ + 1;
    env.seq = ++send_seq_;
    env.honest_origin = true;
    queue_.insert(std::move(env));
}

void kernel::step() {
    if (queue_.empty()) {
        ++now_;
        return;
    }
    now_ = queue_.begin()->deliver_at;
    std::vector<envelope> batch;
    while (!queue_.empty() && queue_.begin()->deliver_at == now_) {
        batch.push_back(*queue_.begin());
        queue_.erase(queue_.begin());
    }
    for (const auto& env : batch) {
        ++delivered_;
        note_trace(proto::message_kind(env.payload), env.from.name(), env.to.name(), "deliver");
        auto it = handlers_.find(env.to);
        if (it == handlers_.end()) continue;
        context ctx(*this, env.to);
        it->second(env, ctx);
    }
    for (auto& [ep, hook] : eos_hooks_) {
        context ctx(*this, ep);
        hook(ctx);
    }
}

bool kernel::run_until_quiescent(step_no max_steps) {
    const step_no limit = now_ + max_steps;
    while (!queue_.empty() && queue_.begin()->deliver_at <= limit) step();
    if (queue_.empty()) return true;
    for (const auto& env : queue_)
        if (env.honest_origin) return false;  // pending honest deliveries: liveness flag
    return true;
}

void kernel::note_trace(const std::string& kind, const std::string& from, const std::string& to,
                        const std::string& summary) {
    trace_.push_back(trace_event{now_, kind, from, to, summary});
}

std::string kernel::trace_text() const {
    std::ostringstream os;
    for (const auto& e : trace_)
        os << e.step << "|" << e.kind << "|" << e.from << "|" << e.to << "|" << e.summary
           << "\n";
    return os.str();
}

std::uint64_t kernel::trace_digest() const {
    const std::string text = trace_text();
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    return core::fnv128(bytes).lo;
}

}  // namespace vcsim::netsim
