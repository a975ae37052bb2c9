#pragma once

#include "vcsim/gametheory/closing_games.hpp"

namespace vcsim::gametheory {

// Deterministic parameter sampling for the sweep suites.
game_params sample_params(std::uint64_t& rng_state, bool security_regime,
                          std::uint32_t f = 3);

// Every equilibrium of the unilateral closing game keeps the aware warden
// group fully on the honest publication, given (f+1)c > v >= d.
bool regime_all_honest_publication(const game_params& p);

// With d > (f+1)c the cheating history (all outdated, no proofs) survives as
// an equilibrium.
bool negative_regime_admits_cheating(const game_params& p);

// (Old, Ignore) is an equilibrium of the no-knowledge closing game; the
// no-knowledge equilibria never pay the intermediary below alpha.
bool old_ignore_is_equilibrium(const game_params& p);

// Knowledge case: (New, {Agree, Ignore}) are equilibria; every equilibrium
// has the intermediary ignoring Old and agreeing-or-ignoring New; values sit
// in {(alpha, alpha), (alpha-eps, alpha)}.
bool knowledge_case_equilibria(const game_params& p);

// The dishonest expected utility stays strictly below the honest one for
// p1 > 0, b >= 1; equal at the p1 = 0 boundary.
bool warden_knowledge_inequality(const game_params& p);

// The solver and the exhaustive oracle agree on every constructed game.
bool oracle_equivalence(const game_params& p);

// Strategic-form entries of the no-knowledge game match the expected
// symbolic forms.
bool nfg_table_matches(const game_params& p);

struct sweep_summary {
    std::size_t samples = 0;
    std::size_t passed = 0;
    std::vector<std::string> failures;
    bool ok() const { return samples > 0 && passed == samples; }
};

using param_check = bool (*)(const game_params&);
sweep_summary sweep(std::size_t samples, std::uint64_t seed, bool security_regime,
                    param_check check);

}  // namespace vcsim::gametheory
