#include "vcsim/gametheory/solvers.hpp"

#include <algorithm>
#include <stdexcept>

namespace vcsim::gametheory {

namespace {

// SPNE fragments for the subtree rooted at n: strategy entries for every
// information set inside, plus the subtree value.
std::vector<solved_strategy> solve_subtree(const efg& g, efg::node_id n) {
    if (g.is_terminal(n)) return {solved_strategy{{}, g.payoff(n)}};

    // Solve children independently, then take every combination.
    std::vector<std::vector<solved_strategy>> kid_sets;
    for (auto c : g.children(n)) kid_sets.push_back(solve_subtree(g, c));

    std::vector<solved_strategy> out;
    std::vector<std::size_t> pick(kid_sets.size(), 0);
    const auto p = g.player_at(n);
    while (true) {
        // Current combination of children equilibria.
        rat best;
        bool first = true;
        for (std::size_t i = 0; i < kid_sets.size(); ++i) {
            const rat u = kid_sets[i][pick[i]].value[p];
            if (first || best < u) best = u;
            first = false;
        }
        for (std::size_t a = 0; a < kid_sets.size(); ++a) {
            if (kid_sets[a][pick[a]].value[p] != best) continue;
            solved_strategy s;
            s.strategy[g.info_set(n)] = a;
            for (std::size_t i = 0; i < kid_sets.size(); ++i)
                for (const auto& [iset, act] : kid_sets[i][pick[i]].strategy)
                    s.strategy[iset] = act;
            s.value = kid_sets[a][pick[a]].value;
            out.push_back(std::move(s));
        }
        // next combination
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < kid_sets[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    // Deduplicate identical fragments.
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.strategy < b.strategy;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) {
                              return a.strategy == b.strategy;
                          }),
              out.end());
    return out;
}

std::vector<rat> play_from(const efg& g, const joint_strategy& s, efg::node_id from) {
    efg::node_id n = from;
    while (!g.is_terminal(n)) n = g.children(n)[s.at(g.info_set(n))];
    return g.payoff(n);
}

}  // namespace

std::vector<solved_strategy> backward_induction(const efg& g) {
    if (!g.perfect_information())
        throw std::invalid_argument(
            "backward induction needs perfect information; use the strategic form");
    return solve_subtree(g, g.root());
}

std::size_t nfg::profile_index(const std::vector<std::size_t>& choice) const {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < strategies.size(); ++p)
        idx = idx * strategies[p].size() + choice[p];
    return idx;
}

std::vector<rat> nfg::payoff_of(const std::vector<std::size_t>& choice) const {
    return payoffs[profile_index(choice)];
}

namespace {

// All pure strategies of one player: the product of actions over their sets.
std::vector<joint_strategy> player_strategies(const efg& g, efg::player_id p) {
    std::vector<std::pair<efg::iset_id, std::size_t>> sets;  // (set, action count)
    for (const auto& [iset, members] : g.information_sets())
        if (g.player_at(members.front()) == p)
            sets.emplace_back(iset, g.actions_at(members.front()).size());
    std::vector<joint_strategy> out{joint_strategy{}};
    for (const auto& [iset, n_actions] : sets) {
        std::vector<joint_strategy> next;
        for (const auto& base : out)
            for (std::size_t a = 0; a < n_actions; ++a) {
                auto s = base;
                s[iset] = a;
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

joint_strategy combine(const std::vector<std::vector<joint_strategy>>& per_player,
                       const std::vector<std::size_t>& choice) {
    joint_strategy s;
    for (std::size_t p = 0; p < per_player.size(); ++p)
        for (const auto& [iset, act] : per_player[p][choice[p]]) s[iset] = act;
    return s;
}

}  // namespace

nfg to_nfg(const efg& g) {
    nfg n;
    std::size_t total = 1;
    for (std::size_t p = 0; p < g.num_players(); ++p) {
        n.players.push_back(g.player_name(p));
        n.strategies.push_back(player_strategies(g, p));
        total *= n.strategies.back().size();
    }
    n.payoffs.resize(total);
    std::vector<std::size_t> choice(g.num_players(), 0);
    bool done = total == 0;
    while (!done) {
        n.payoffs[n.profile_index(choice)] = play(g, combine(n.strategies, choice));
        done = true;
        std::size_t p = g.num_players();
        while (p-- > 0) {
            if (++choice[p] < n.strategies[p].size()) {
                done = false;
                break;
            }
            choice[p] = 0;
        }
    }
    return n;
}

std::vector<std::vector<std::size_t>> pure_nash(const nfg& n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> choice(n.players.size(), 0);
    while (true) {
        bool stable = true;
        const auto base = n.payoff_of(choice);
        for (std::size_t p = 0; p < n.players.size() && stable; ++p) {
            auto alt = choice;
            for (std::size_t a = 0; a < n.strategies[p].size(); ++a) {
                if (a == choice[p]) continue;
                alt[p] = a;
                if (n.payoff_of(alt)[p] > base[p]) {
                    stable = false;
                    break;
                }
            }
        }
        if (stable) out.push_back(choice);
        std::size_t p = n.players.size();
        bool done = true;
        while (p-- > 0) {
            if (++choice[p] < n.strategies[p].size()) {
                done = false;
                break;
            }
            choice[p] = 0;
        }
        if (done) break;
    }
    return out;
}

std::vector<solved_strategy> brute_force_spne(const efg& g, std::size_t cap) {
    std::vector<std::vector<joint_strategy>> per_player;
    std::size_t total = 1;
    for (std::size_t p = 0; p < g.num_players(); ++p) {
        per_player.push_back(player_strategies(g, p));
        total *= per_player.back().size();
        if (total > cap) throw std::length_error("strategy space exceeds the cap");
    }
    const auto roots = g.subgame_roots();

    std::vector<solved_strategy> out;
    std::vector<std::size_t> choice(g.num_players(), 0);
    while (true) {
        const auto s = combine(per_player, choice);
        bool spne = true;
        for (auto r : roots) {
            for (std::size_t p = 0; p < g.num_players() && spne; ++p) {
                const rat base = play_from(g, s, r)[p];
                for (const auto& alt_frag : per_player[p]) {
                    auto alt = s;
                    for (const auto& [iset, act] : alt_frag) alt[iset] = act;
                    if (play_from(g, alt, r)[p] > base) {
                        spne = false;
                        break;
                    }
                }
            }
            if (!spne) break;
        }
        if (spne) out.push_back(solved_strategy{s, play(g, s)});

        std::size_t p = g.num_players();
        bool done = true;
        while (p-- > 0) {
            if (++choice[p] < per_player[p].size()) {
                done = false;
                break;
            }
            choice[p] = 0;
        }
        if (done) break;
    }
    return out;
}

bool same_strategy_sets(const std::vector<solved_strategy>& a,
                        const std::vector<solved_strategy>& b) {
    auto key = [](const std::vector<solved_strategy>& v) {
        std::vector<joint_strategy> k;
        for (const auto& s : v) k.push_back(s.strategy);
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    };
    return key(a) == key(b);
}

namespace {
bool iso_walk(const efg& a, const efg& b, efg::node_id na, efg::node_id nb,
              std::map<efg::iset_id, efg::iset_id>& iset_map) {
    if (a.is_terminal(na) != b.is_terminal(nb)) return false;
    if (a.is_terminal(na)) return a.payoff(na) == b.payoff(nb);
    if (a.actions_at(na) != b.actions_at(nb)) return false;
    auto it = iset_map.find(a.info_set(na));
    if (it != iset_map.end()) {
        if (it->second != b.info_set(nb)) return false;
    } else {
        for (const auto& [x, y] : iset_map)
            if (y == b.info_set(nb)) return false;  // must stay injective
        iset_map[a.info_set(na)] = b.info_set(nb);
    }
    for (std::size_t i = 0; i < a.children(na).size(); ++i)
        if (!iso_walk(a, b, a.children(na)[i], b.children(nb)[i], iset_map)) return false;
    return true;
}
}  // namespace

bool structurally_isomorphic(const efg& a, const efg& b) {
    if (a.num_players() != b.num_players()) return false;
    std::map<efg::iset_id, efg::iset_id> iset_map;
    return iso_walk(a, b, a.root(), b.root(), iset_map);
}

}  // namespace vcsim::gametheory
