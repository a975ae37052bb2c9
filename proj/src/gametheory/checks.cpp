#include "vcsim/gametheory/checks.hpp"

#include "vcsim/core/quorum.hpp"

namespace vcsim::gametheory {

namespace {
std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Action index 0 at the warden root is the all-honest split (a = f+1).
bool on_path_all_honest(const efg& g, const joint_strategy& s) {
    return s.at(g.info_set(g.root())) == 0;
}
}  // namespace

game_params sample_params(std::uint64_t& rng, bool security_regime, std::uint32_t f) {
    game_params p;
    p.f = f;
    p.alpha = 6 + static_cast<std::int64_t>(splitmix(rng) % 12);
    p.eps = 1 + static_cast<std::int64_t>(splitmix(rng) % (p.alpha - 1));
    p.k = 1 + static_cast<std::int64_t>(splitmix(rng) % 4);
    if (security_regime) {
        p.v = 4 + static_cast<std::int64_t>(splitmix(rng) % 12);
        p.d = 1 + static_cast<std::int64_t>(splitmix(rng) % p.v);
        p.c = core::required_collateral(p.v, f) +
              static_cast<std::int64_t>(splitmix(rng) % 3);
    } else {
        // d > (f+1)c while d <= v still holds.
        p.c = 1;
        p.v = static_cast<std::int64_t>(f) + 2 +
              static_cast<std::int64_t>(splitmix(rng) % 8);
        p.d = static_cast<std::int64_t>(f) + 2 +
              static_cast<std::int64_t>(splitmix(rng) % (p.v - f - 1));
    }
    p.p1 = rat(1 + static_cast<std::int64_t>(splitmix(rng) % 7),
               7 + static_cast<std::int64_t>(splitmix(rng) % 5));
    return p;
}

bool regime_all_honest_publication(const game_params& p) {
    if (!p.security_regime()) return false;
    const auto g = build_subgame1(p);
    const auto spnes = backward_induction(g);
    if (spnes.empty()) return false;
    for (const auto& s : spnes)
        if (!on_path_all_honest(g, s.strategy)) return false;
    return true;
}

bool negative_regime_admits_cheating(const game_params& p) {
    if (p.d <= (static_cast<std::int64_t>(p.f) + 1) * p.c) return false;
    const auto g = build_subgame1(p);
    const auto root_iset = g.info_set(g.root());
    // The cheating history: the aware group publishes only outdated states
    // (last action) and the closer answers with zero proofs.
    const auto all_stale_node = g.children(g.root()).back();
    for (const auto& s : backward_induction(g)) {
        if (s.strategy.at(root_iset) + 1 != g.children(g.root()).size()) continue;
        if (s.strategy.at(g.info_set(all_stale_node)) == 0) return true;
    }
    return false;
}

bool old_ignore_is_equilibrium(const game_params& p) {
    const auto g = build_closing_game(p, false);
    const auto n = to_nfg(g);
    const auto isets = g.information_sets();
    efg::iset_id bob_set = g.info_set(g.root());
    efg::iset_id ingrid_set = 0;
    for (const auto& [iset, members] : isets)
        if (g.player_at(members.front()) == 1) ingrid_set = iset;

    const auto& bob_actions = g.actions_at(g.root());
    const auto idx_of = [](const std::vector<std::string>& v, const std::string& a) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] == a) return i;
        return v.size();
    };
    const std::size_t bob_old = idx_of(bob_actions, "Old");
    const auto ingrid_node = isets.at(ingrid_set).front();
    const std::size_t ingrid_ignore = idx_of(g.actions_at(ingrid_node), "Ignore");

    bool found = false;
    for (const auto& profile : pure_nash(n)) {
        const auto& bs = n.strategies[0][profile[0]];
        const auto& is = n.strategies[1][profile[1]];
        const auto pay = n.payoff_of(profile);
        if (pay[1] < rat(p.alpha)) return false;  // the intermediary never loses
        if (bs.at(bob_set) == bob_old && is.at(ingrid_set) == ingrid_ignore) {
            found = true;
            if (!(pay[0] == rat(p.alpha - p.eps) && pay[1] == rat(p.alpha))) return false;
        }
    }
    return found;
}

bool knowledge_case_equilibria(const game_params& p) {
    const auto g = build_closing_game(p, true);
    const auto spnes = backward_induction(g);
    if (spnes.empty()) return false;

    const auto root = g.root();
    const auto& bob_actions = g.actions_at(root);
    std::size_t bob_new = 0, bob_uni = 0;
    for (std::size_t i = 0; i < bob_actions.size(); ++i) {
        if (bob_actions[i] == "New") bob_new = i;
        if (bob_actions[i] == "Uni") bob_uni = i;
    }
    (void)bob_uni;
    const auto old_node = g.children(root)[1];
    const auto new_node = g.children(root)[2];
    auto action_index = [&](efg::node_id n, const std::string& a) {
        const auto& acts = g.actions_at(n);
        for (std::size_t i = 0; i < acts.size(); ++i)
            if (acts[i] == a) return i;
        return acts.size();
    };
    const std::size_t agree_old = action_index(old_node, "Agree");
    const std::size_t ignore_old = action_index(old_node, "Ignore");
    const std::size_t agree_new = action_index(new_node, "Agree");
    const std::size_t ignore_new = action_index(new_node, "Ignore");
    (void)agree_old;

    const rat a(p.alpha), e(p.eps);
    bool saw_new_agree = false, saw_new_ignore = false;
    for (const auto& s : spnes) {
        // The intermediary's components are pinned: ignore the outdated
        // request, agree-or-ignore the honest one.
        if (s.strategy.at(g.info_set(old_node)) != ignore_old) return false;
        const auto at_new = s.strategy.at(g.info_set(new_node));
        if (at_new != agree_new && at_new != ignore_new) return false;
        if (!((s.value[0] == a && s.value[1] == a) ||
              (s.value[0] == a - e && s.value[1] == a)))
            return false;
        const bool bob_plays_new = s.strategy.at(g.info_set(root)) == bob_new;
        if (at_new == agree_new) {
            // Agreement makes New strictly best for the closer.
            if (!bob_plays_new) return false;
            saw_new_agree = true;
        }
        if (bob_plays_new && at_new == ignore_new) saw_new_ignore = true;
    }
    return saw_new_agree && saw_new_ignore;
}

bool warden_knowledge_inequality(const game_params& p) {
    const std::int64_t group = static_cast<std::int64_t>(p.f) + 1;
    for (std::int64_t b = 0; b <= group; ++b) {
        const std::int64_t a = group - b;
        const auto u = expected_warden_utility(p, a, b);
        if (u.honest != rat(group) * rat(p.k)) return false;
        if (b >= 1 && p.p1 > rat(0)) {
            if (!(u.dishonest < u.honest)) return false;
        } else if (b == 0) {
            if (u.dishonest != u.honest) return false;
        }
        // Boundary: a closer that can never punish leaves deviation free.
        game_params q = p;
        q.p1 = rat(0);
        const auto u0 = expected_warden_utility(q, a, b);
        if (u0.dishonest != u0.honest) return false;
    }
    return true;
}

bool oracle_equivalence(const game_params& p) {
    {
        const auto g = build_subgame1(p);
        if (!same_strategy_sets(backward_induction(g), brute_force_spne(g))) return false;
    }
    {
        const auto g = build_closing_game(p, true);
        if (!same_strategy_sets(backward_induction(g), brute_force_spne(g))) return false;
    }
    {
        const auto g = build_closing_game(p, false);
        const auto brute = brute_force_spne(g);
        const auto n = to_nfg(g);
        std::vector<solved_strategy> via_nfg;
        for (const auto& profile : pure_nash(n)) {
            joint_strategy s;
            for (std::size_t pl = 0; pl < n.strategies.size(); ++pl)
                for (const auto& [iset, act] : n.strategies[pl][profile[pl]]) s[iset] = act;
            via_nfg.push_back(solved_strategy{s, play(g, s)});
        }
        if (!same_strategy_sets(brute, via_nfg)) return false;
    }
    return true;
}

bool nfg_table_matches(const game_params& p) {
    const auto t = closing_game_table(p);
    const rat a(p.alpha), e(p.eps), d(p.d);
    auto cell = [&](const char* b, const char* i) { return t.cells.at({b, i}); };
    using pr = std::pair<rat, rat>;
    if (cell("Uni", "Ignore") != pr{a - e, a}) return false;
    if (cell("Uni", "Agree") != pr{a - e, a}) return false;
    if (cell("Uni", "Disagree") != pr{a - e, a}) return false;
    if (cell("Old", "Ignore") != pr{a - e, a}) return false;
    if (cell("Old", "Agree") != pr{a + d, a - d}) return false;
    if (cell("Old", "Disagree") != pr{a, a - e}) return false;
    if (cell("New", "Ignore") != pr{a - e, a}) return false;
    if (cell("New", "Agree") != pr{a, a}) return false;
    if (cell("New", "Disagree") != pr{a, a - e}) return false;
    return true;
}

sweep_summary sweep(std::size_t samples, std::uint64_t seed, bool security_regime,
                    param_check check) {
    sweep_summary out;
    std::uint64_t rng = seed;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::uint32_t f = 1 + static_cast<std::uint32_t>(splitmix(rng) % 3);
        const auto p = sample_params(rng, security_regime, f);
        ++out.samples;
        if (check(p))
            ++out.passed;
        else
            out.failures.push_back("sample " + std::to_string(i) + " f=" + std::to_string(f) +
                                   " v=" + std::to_string(p.v) + " d=" + std::to_string(p.d) +
                                   " c=" + std::to_string(p.c));
    }
    return out;
}

}  // namespace vcsim::gametheory
