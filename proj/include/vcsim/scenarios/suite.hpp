#pragma once

#include "vcsim/scenarios/library.hpp"

namespace vcsim::scenarios {

struct suite_result {
    std::size_t runs = 0;
    std::size_t passed = 0;
    std::size_t conservation_breaches = 0;
    std::vector<std::string> failures;  // one line per failing run
    bool ok() const { return runs > 0 && passed == runs && conservation_breaches == 0; }
};

// Balance security: randomized pessimistic-case coverage with up to f
// Byzantine wardens per committee; no honest participant may lose a coin.
suite_result balance_security_suite(std::size_t runs, std::uint64_t seed0,
                                    std::uint32_t hops = 2);

// Liveness: every close with an honest initiator commits despite censorship
// delays up to the horizon; swept over horizons.
suite_result liveness_suite(std::size_t runs, std::uint64_t seed0,
                            const std::vector<netsim::step_no>& horizons,
                            std::uint32_t hops = 2);

// Same-state closure under state-splitting collusion, including forced
// same-block cross-check arrival and same-sequence value collisions.
suite_result same_state_closure_suite(std::size_t runs_per_f, std::uint64_t seed0,
                                      std::uint32_t hops = 2);

// The collusion run with cross-checking disabled must breach balance
// security; the defense is load-bearing.
bool ablation_shows_breach(std::uint64_t seed);

}  // namespace vcsim::scenarios
