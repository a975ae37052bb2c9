#pragma once

#include "vcsim/gametheory/efg.hpp"

namespace vcsim::gametheory {

struct solved_strategy {
    joint_strategy strategy;
    std::vector<rat> value;  // root payoff under the strategy
};

// All pure subgame-perfect equilibria of a perfect-information game via
// bottom-up argmax with ties preserved as a set. Rejects imperfect
// information (use the strategic-form route there).
std::vector<solved_strategy> backward_induction(const efg& g);

// Strategic form over information-set-measurable pure strategies.
struct nfg {
    std::vector<std::string> players;
    // per player: list of pure strategies (fragments over that player's sets)
    std::vector<std::vector<joint_strategy>> strategies;
    // flat payoff table indexed by mixed-radix strategy profile
    std::vector<std::vector<rat>> payoffs;

    std::size_t profile_index(const std::vector<std::size_t>& choice) const;
    std::vector<rat> payoff_of(const std::vector<std::size_t>& choice) const;
};

nfg to_nfg(const efg& g);
std::vector<std::vector<std::size_t>> pure_nash(const nfg& n);

// Independent oracle: enumerate every joint strategy and keep those that are
// a Nash equilibrium in every subgame (subgames respect information sets).
// Refuses games with more than `cap` joint strategies.
std::vector<solved_strategy> brute_force_spne(const efg& g, std::size_t cap = 1000000);

bool same_strategy_sets(const std::vector<solved_strategy>& a,
                        const std::vector<solved_strategy>& b);

// Shape-equality up to renaming: same branching, action labels, information
// pattern and leaf payoffs.
bool structurally_isomorphic(const efg& a, const efg& b);

}  // namespace vcsim::gametheory
