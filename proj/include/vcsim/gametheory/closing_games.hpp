#pragma once

#include "vcsim/gametheory/solvers.hpp"

#include <cstdint>

namespace vcsim::gametheory {

// Parameters of the closing games. All integer except the knowledge
// probability; utilities stay exact rationals.
struct game_params {
    std::int64_t alpha = 10;  // profit for closing the channel
    std::int64_t eps = 1;     // unilateral-closing cost, 0 < eps < alpha
    std::int64_t d = 5;       // fraud profit, 0 < d <= v
    std::int64_t k = 1;       // per-warden publication incentive, k > 0
    std::int64_t c = 4;       // per-warden collateral
    std::uint32_t f = 3;
    std::int64_t v = 10;      // virtual channel balance
    rat p1 = rat(1, 2);       // probability the intermediary can punish

    bool valid(std::string* why = nullptr) const;
    bool security_regime() const {
        return (static_cast<std::int64_t>(f) + 1) * c > v && v >= d;
    }
};

// Subgame 1: the unilateral closing game. The warden bloc (the aware group
// W2, acting for all wardens under the simultaneity assumption) picks how
// many of its f+1 members publish the latest state (a) versus an outdated
// one (b = f+1-a); the closer then picks how many proofs-of-fraud to submit.
// Leaf payoffs come from the chain settlement rules, never hand-coded.
// Player order: {P, counterparty, W1, W2, W3}.
efg build_subgame1(const game_params& p);

// Indices of the players in subgame 1.
inline constexpr std::size_t kCloser = 0;
inline constexpr std::size_t kCounterparty = 1;
inline constexpr std::size_t kGroup1 = 2;
inline constexpr std::size_t kGroup2 = 3;
inline constexpr std::size_t kGroup3 = 4;

// The closing game between the closing end party and the intermediary.
// ingrid_knows=false merges the intermediary's decision nodes after Old and
// New into one information set. Player order: {Bob, Ingrid}.
efg build_closing_game(const game_params& p, bool ingrid_knows);

// The same construction derived from an n-party path (n = hops + 1). The
// closing game still involves exactly two movers.
efg build_multihop_closing_game(const game_params& p, bool ingrid_knows, std::uint32_t hops);

// Expected warden-bloc utilities when the closer's knowledge is uncertain:
// dishonest (a latest + b outdated) versus fully honest publication.
struct warden_utilities {
    rat dishonest;
    rat honest;
};
warden_utilities expected_warden_utility(const game_params& p, std::int64_t a, std::int64_t b);

// Game-theoretic security: every main party's utility under every
// equilibrium of every constructed closing game stays >= alpha - eps.
bool check_security(const game_params& p);

// Opening game: any inconsistent virtual-lock amount makes some colluder
// strictly worse off in the induced worst-case settlement.
bool check_opening_game(const game_params& p);

// 3x3 strategic form of the no-knowledge closing game, addressed by action
// names, for table comparisons.
struct closing_nfg_table {
    std::vector<std::string> bob_actions;
    std::vector<std::string> ingrid_actions;
    std::map<std::pair<std::string, std::string>, std::pair<rat, rat>> cells;
};
closing_nfg_table closing_game_table(const game_params& p);

}  // namespace vcsim::gametheory
