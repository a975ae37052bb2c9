#pragma once

#include "vcsim/netsim/messages.hpp"

#include <functional>
#include <set>

namespace vcsim::netsim {

using core::actor_id;
using step_no = std::uint64_t;

// Network endpoints: protocol actors, the blockchain, and the scenario driver.
enum class endpoint_kind : std::uint8_t { actor = 0, blockchain = 1, driver = 2 };

struct endpoint {
    endpoint_kind kind = endpoint_kind::actor;
    actor_id id;

    friend bool operator==(const endpoint& a, const endpoint& b) {
        if (a.kind != b.kind) return false;
        return a.kind != endpoint_kind::actor || a.id == b.id;
    }
    friend bool operator<(const endpoint& a, const endpoint& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.kind != endpoint_kind::actor) return false;
        return a.id < b.id;
    }
    std::string name() const;
};

inline endpoint actor_ep(const actor_id& id) { return endpoint{endpoint_kind::actor, id}; }
inline endpoint blockchain_ep() { return endpoint{endpoint_kind::blockchain, {}}; }
inline endpoint driver_ep() { return endpoint{endpoint_kind::driver, {}}; }

struct envelope {
    endpoint from;
    endpoint to;
    proto::message payload;
    step_no sent_at = 0;
    step_no deliver_at = 0;
    std::uint64_t seq = 0;  // monotone send counter; tie-break at equal deliver_at
    bool honest_origin = true;
};

// Messages from honest senders are delayed at most `horizon` steps and never
// dropped. Byzantine-origin messages may be dropped by rule.
struct censorship_rule {
    std::optional<actor_id> from;
    std::optional<actor_id> to;
    std::string kind;  // empty = any kind
    step_no delay = 0;
};
struct drop_rule {
    actor_id from;
    std::string kind;  // empty = any kind
};
struct adversary_policy {
    std::uint64_t seed = 1;
    step_no horizon = 50;
    step_no jitter = 3;  // default delivery delay in [1, jitter]
    std::vector<censorship_rule> censorship;
    std::vector<drop_rule> drops;
};

struct trace_event {
    step_no step = 0;
    std::string kind;
    std::string from;
    std::string to;
    std::string summary;
};

class kernel;

// Handlers send through the context; they never see the clock.
class context {
  public:
    context(kernel& k, endpoint self) : kernel_(k), self_(self) {}
    void send(const endpoint& to, proto::message m);
    void log(const std::string& text);

  private:
    kernel& kernel_;
    endpoint self_;
};

class kernel {
  public:
    using handler = std::function<void(const envelope&, context&)>;
    using end_of_step_hook = std::function<void(context&)>;

    explicit kernel(adversary_policy policy);

    void register_handler(const endpoint& ep, handler h);
    void set_end_of_step_hook(const endpoint& ep, end_of_step_hook h);
    void mark_byzantine(const actor_id& a) { byzantine_.insert(a); }
    bool is_byzantine(const actor_id& a) const { return byzantine_.count(a) > 0; }

    // Adversary-scheduled send: delay within the horizon for honest senders,
    // droppable for Byzantine senders.
    void send(const endpoint& from, const endpoint& to, proto::message m);
    // Exact-time scheduling for scenario control inputs.
    void schedule_exact(const endpoint& from, const endpoint& to, proto::message m,
                        step_no deliver_at);

    step_no now() const { return now_; }
    bool pending() const { return !queue_.empty(); }
    std::size_t pending_count() const { return queue_.size(); }

    // Delivers everything due at the next pending step.
    void step();
    // Runs until the queue drains or max_steps elapse. Returns false (liveness
    // violation flag) if honest-origin envelopes were still pending at the cap.
    bool run_until_quiescent(step_no max_steps);

    void note_trace(const std::string& kind, const std::string& from, const std::string& to,
                    const std::string& summary);
    const std::vector<trace_event>& trace() const { return trace_; }
    std::string trace_text() const;
    std::uint64_t trace_digest() const;

    std::uint64_t delivered_count() const { return delivered_; }
    std::uint64_t dropped_count() const { return dropped_; }

  private:
    friend class context;
    step_no pick_delay(const envelope& env, bool& drop);
    std::uint64_t next_rand();

    adversary_policy policy_;
    std::uint64_t rng_state_;
    step_no now_ = 0;
    std::uint64_t send_seq_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t dropped_ = 0;

    struct queue_order {
        bool operator()(const envelope& a, const envelope& b) const {
            if (a.deliver_at != b.deliver_at) return a.deliver_at < b.deliver_at;
            return a.seq < b.seq;
        }
    };
    std::set<envelope, queue_order> queue_;
    std::map<endpoint, handler> handlers_;
    std::vector<std::pair<endpoint, end_of_step_hook>> eos_hooks_;
    std::set<actor_id> byzantine_;
    std::vector<trace_event> trace_;
};

}  // namespace vcsim::netsim
