#pragma once

#include "abside/prover/proof.hpp"

namespace abside::prover {

struct RunResult {
    bool closed = false;
    long steps = 0;
    bool budget_exhausted = false;
};

// Repeatedly applies the cheapest rule to the leftmost open goal that is not
// stuck, until every goal is closed or stuck or the budget is spent.
// Continues from the current open goals, so a replayed proof can be finished.
RunResult run_auto(Proof& proof, const Settings& settings);

}  // namespace abside::prover
