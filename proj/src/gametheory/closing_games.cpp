#include "vcsim/gametheory/closing_games.hpp"

#include "vcsim/chainsim/settlement.hpp"
#include "vcsim/core/crypto.hpp"
#include "vcsim/core/quorum.hpp"

namespace vcsim::gametheory {

using core::actor_id;
using core::coins;

bool game_params::valid(std::string* why) const {
    auto fail = [&](const char* m) {
        if (why) *why = m;
        return false;
    };
    if (alpha <= 0) return fail("alpha must be positive");
    if (eps <= 0 || eps >= alpha) return fail("need 0 < eps < alpha");
    if (d <= 0 || d > v) return fail("need 0 < d <= v");
    if (k <= 0) return fail("need k > 0");
    if (c <= 0) return fail("need c > 0");
    if (f < 1) return fail("need f >= 1");
    if (p1 < rat(0) || p1 > rat(1)) return fail("p1 must lie in [0,1]");
    return true;
}

namespace {

struct oracle_setup {
    std::vector<actor_id> committee;
    core::update_announcement latest;
    core::update_announcement stale;
    actor_id closer;
    actor_id counterparty;
};

oracle_setup make_setup(const game_params& p) {
    oracle_setup s;
    s.closer = core::make_party(0, "P");
    s.counterparty = core::make_party(1, "Q");
    for (std::uint32_t i = 0; i < core::committee_size(p.f); ++i)
        s.committee.push_back(core::make_warden(i, "W" + std::to_string(i)));

    core::channel_state stale_state;
    stale_state.id = 100;
    stale_state.seq = 2;
    stale_state.balances[s.closer] = p.d;
    stale_state.balances[s.counterparty] = p.v - p.d;
    core::channel_state latest_state = stale_state;
    latest_state.seq = 3;
    latest_state.balances[s.closer] = 0;
    latest_state.balances[s.counterparty] = p.v;

    s.stale.state = stale_state;
    s.stale.end_party_sigs = {core::sign_announcement(s.closer, stale_state),
                              core::sign_announcement(s.counterparty, stale_state)};
    s.latest.state = latest_state;
    s.latest.end_party_sigs = {core::sign_announcement(s.closer, latest_state),
                               core::sign_announcement(s.counterparty, latest_state)};
    return s;
}

chainsim::publication_entry publication(const oracle_setup& s, std::size_t warden_index,
                                        bool latest) {
    const auto& ann = latest ? s.latest : s.stale;
    chainsim::publication_entry e;
    e.warden = s.committee[warden_index];
    core::signed_state_publication pub;
    pub.warden = e.warden;
    pub.announcement = ann;
    pub.warden_sig = core::sign_announcement(e.warden, ann.state);
    e.vc = pub;
    return e;
}

// Evaluates one leaf of the unilateral closing game through the settlement
// rules: groups W1 (unaware, f wardens), W2 (aware, f+1), W3 (aware, f);
// a of W2 publish the latest state, b publish the outdated one, and the
// closer proves pf of the b frauds. Publication order W1, W2, W3.
std::vector<rat> subgame1_leaf(const game_params& p, std::int64_t a, std::int64_t b,
                               std::int64_t pf, const oracle_setup& s) {
    const std::size_t g1 = p.f;          // unaware, publish outdated honestly
    const std::size_t g2 = p.f + 1;      // aware
    chainsim::settlement_input in;
    in.f = p.f;
    in.warden_collateral = p.c;
    in.fee_pot = static_cast<coins>(core::quorum_threshold(p.f)) * p.k;

    std::vector<actor_id> bribed;
    for (std::size_t i = 0; i < g1; ++i) in.publications.push_back(publication(s, i, false));
    for (std::size_t i = 0; i < g2; ++i) {
        const bool publishes_latest = static_cast<std::int64_t>(i) < a;
        in.publications.push_back(publication(s, g1 + i, publishes_latest));
        if (!publishes_latest) bribed.push_back(s.committee[g1 + i]);
    }
    for (std::size_t i = g1 + g2; i < s.committee.size(); ++i)
        in.publications.push_back(publication(s, i, true));
    for (std::int64_t i = 0; i < pf; ++i) in.proven_fraud.push_back(bribed[i]);

    const auto res = chainsim::evaluate_unilateral_close(in);

    // Channel shares relative to the latest entitlement.
    coins closer_share = 0;
    if (res.fraud_overflow) {
        closer_share = 0;  // the whole balance routes to the counterparty
    } else if (res.ws) {
        closer_share = res.ws->state.balances.at(s.closer);
    }
    const coins counter_share = p.v - closer_share;

    auto group_fee = [&](std::size_t from, std::size_t count) {
        coins total = 0;
        for (std::size_t i = from; i < from + count; ++i) {
            auto it = res.fee_payments.find(s.committee[i]);
            if (it != res.fee_payments.end()) total += it->second;
        }
        return total;
    };

    std::vector<rat> u(5, rat(0));
    u[kCloser] = rat(p.alpha + closer_share + res.slash_total);
    u[kCounterparty] = rat(p.alpha + counter_share - p.v);
    u[kGroup1] = rat(group_fee(0, g1));
    u[kGroup2] = rat(group_fee(g1, g2) - res.slash_total);
    u[kGroup3] = rat(group_fee(g1 + g2, p.f));
    (void)b;
    return u;
}

}  // namespace

efg build_subgame1(const game_params& p) {
    std::string why;
    if (!p.valid(&why)) throw std::invalid_argument("game_params: " + why);
    const auto s = make_setup(p);

    efg g({"P", "Q", "W1", "W2", "W3"});
    const std::int64_t moves = p.f + 2;  // (a, b) splits with a+b = f+1
    std::vector<std::string> w_actions;
    for (std::int64_t a = p.f + 1; a >= 0; --a) {
        const std::int64_t b = p.f + 1 - a;
        w_actions.push_back(std::to_string(a) + "Pl+" + std::to_string(b) + "Po");
    }
    auto w_children = g.add_decision(g.root(), kGroup2, w_actions);

    for (std::int64_t idx = 0; idx < moves; ++idx) {
        const std::int64_t a = p.f + 1 - idx;
        const std::int64_t b = p.f + 1 - a;
        std::vector<std::string> pf_actions;
        for (std::int64_t pf = 0; pf <= b; ++pf)
            pf_actions.push_back("PF=" + std::to_string(pf));
        auto leaves = g.add_decision(w_children[idx], kCloser, pf_actions);
        for (std::int64_t pf = 0; pf <= b; ++pf)
            g.set_payoff(leaves[pf], subgame1_leaf(p, a, b, pf, s));
    }
    return g;
}

namespace {
efg build_closing_tree(const game_params& p, bool ingrid_knows, const std::string& bob,
                       const std::string& ingrid) {
    // Branch values substitute the unilateral closing subgame's equilibrium
    // outcome with the closing cost applied to whoever goes on-chain.
    const rat a(p.alpha), e(p.eps), d(p.d);
    efg g({bob, ingrid});
    auto kids = g.add_decision(g.root(), 0, {"Uni", "Old", "New"});
    g.set_payoff(kids[0], {a - e, a});

    auto old_kids = g.add_decision(kids[1], 1, {"Agree", "Disagree", "Ignore"});
    g.set_payoff(old_kids[0], {a + d, a - d});
    g.set_payoff(old_kids[1], {a, a - e});
    g.set_payoff(old_kids[2], {a - e, a});

    auto new_kids = g.add_decision(kids[2], 1, {"Agree", "Disagree", "Ignore"});
    g.set_payoff(new_kids[0], {a, a});
    g.set_payoff(new_kids[1], {a, a - e});
    g.set_payoff(new_kids[2], {a - e, a});

    if (!ingrid_knows) g.merge_information_sets({kids[1], kids[2]});
    return g;
}
}  // namespace

efg build_closing_game(const game_params& p, bool ingrid_knows) {
    std::string why;
    if (!p.valid(&why)) throw std::invalid_argument("game_params: " + why);
    return build_closing_tree(p, ingrid_knows, "Bob", "Ingrid");
}

efg build_multihop_closing_game(const game_params& p, bool ingrid_knows, std::uint32_t hops) {
    std::string why;
    if (!p.valid(&why)) throw std::invalid_argument("game_params: " + why);
    if (hops < 2) throw std::invalid_argument("need at least two hops");
    // However long the path, a close renegotiates exactly one payment
    // channel: the closer and its neighbor are the only movers.
    std::vector<std::string> path;
    for (std::uint32_t i = 0; i <= hops; ++i) path.push_back(std::string(1, 'A' + i));
    const std::string closer = path.back();
    const std::string neighbor = path[path.size() - 2];
    return build_closing_tree(p, ingrid_knows, closer, neighbor);
}

warden_utilities expected_warden_utility(const game_params& p, std::int64_t a,
                                         std::int64_t b) {
    if (a + b != static_cast<std::int64_t>(p.f) + 1 || a < 0 || b < 0)
        throw std::invalid_argument("need a + b = f + 1");
    const rat p1 = p.p1;
    const rat p2 = rat(1) - p1;
    const rat group(static_cast<std::int64_t>(p.f) + 1);
    warden_utilities u;
    u.dishonest = (rat(a) * p1 + group * p2) * rat(p.k) - rat(b) * rat(p.c) * p1;
    u.honest = group * rat(p.k);
    return u;
}

closing_nfg_table closing_game_table(const game_params& p) {
    const auto g = build_closing_game(p, false);
    const auto n = to_nfg(g);
    closing_nfg_table t;
    // Bob's strategies are root actions; Ingrid's one information set covers
    // both of her nodes.
    const auto isets = g.information_sets();
    efg::iset_id bob_set = 0, ingrid_set = 0;
    for (const auto& [iset, members] : isets) {
        if (g.player_at(members.front()) == 0) bob_set = iset;
        else ingrid_set = iset;
    }
    t.bob_actions = g.actions_at(g.root());
    const auto ingrid_node = isets.at(ingrid_set).front();
    t.ingrid_actions = g.actions_at(ingrid_node);
    for (std::size_t bi = 0; bi < n.strategies[0].size(); ++bi) {
        for (std::size_t ii = 0; ii < n.strategies[1].size(); ++ii) {
            const auto pay = n.payoff_of({bi, ii});
            const auto& b_act = t.bob_actions[n.strategies[0][bi].at(bob_set)];
            const auto& i_act = t.ingrid_actions[n.strategies[1][ii].at(ingrid_set)];
            t.cells[{b_act, i_act}] = {pay[0], pay[1]};
        }
    }
    return t;
}

bool check_security(const game_params& p) {
    if (!p.valid(nullptr) || !p.security_regime()) return false;
    const rat floor = rat(p.alpha) - rat(p.eps);

    // Unilateral closing game: both main parties.
    {
        const auto g = build_subgame1(p);
        for (const auto& s : backward_induction(g)) {
            if (s.value[kCloser] < floor) return false;
            if (s.value[kCounterparty] < floor) return false;
        }
    }
    // Perfect-information closing game.
    {
        const auto g = build_closing_game(p, true);
        for (const auto& s : backward_induction(g))
            for (std::size_t i = 0; i < 2; ++i)
                if (s.value[i] < floor) return false;
    }
    // Imperfect information: equilibria of the strategic form.
    {
        const auto g = build_closing_game(p, false);
        const auto n = to_nfg(g);
        for (const auto& profile : pure_nash(n)) {
            const auto pay = n.payoff_of(profile);
            for (std::size_t i = 0; i < 2; ++i)
                if (pay[i] < floor) return false;
        }
    }
    return true;
}

bool check_opening_game(const game_params& p) {
    // Virtual balance v split (c_lock, d_lock); the colluding pair funds its
    // own channel with d' instead of d_lock. Worst-case settlements sit at
    // the extremes of the final state.
    const coins v = p.v;
    const coins d_lock = p.d;  // any interior split works; d <= v by contract
    const coins c_lock = v - d_lock;
    auto ingrid_delta = [&](coins dprime) {
        return std::min(v, c_lock + dprime) - dprime - c_lock;
    };
    auto alice_delta = [&](coins dprime) {
        return std::min(v, c_lock + dprime) - c_lock - d_lock;
    };
    if (ingrid_delta(d_lock) != 0 || alice_delta(d_lock) != 0) return false;
    for (coins dprime = 0; dprime <= v + 3; ++dprime) {
        if (dprime == d_lock) continue;
        const coins worst = std::min(ingrid_delta(dprime), alice_delta(dprime));
        if (worst >= 0) return false;  // a deviation nobody pays for
        if (dprime > d_lock && ingrid_delta(dprime) >= 0) return false;
        if (dprime < d_lock && alice_delta(dprime) >= 0) return false;
    }
    return true;
}

}  // namespace vcsim::gametheory
