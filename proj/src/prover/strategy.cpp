#include "abside/prover/strategy.hpp"

#include <set>

#include "abside/prover/rules.hpp"

namespace abside::prover {

RunResult run_auto(Proof& proof, const Settings& settings) {
    proof.settings = settings;
    RunResult res;
    std::set<const ProofNode*> stuck;
    while (res.steps < settings.budget) {
        ProofNode* goal = nullptr;
        for (ProofNode* n : proof.open_goals()) {
            if (!stuck.count(n)) {
                goal = n;
                break;
            }
        }
        if (!goal) break;
        auto app = select_rule(goal->seq, proof, settings);
        if (!app) {
            stuck.insert(goal);
            continue;
        }
        auto premisses = apply_rule(goal->seq, *app, proof, settings);
        proof.expand(*goal, std::move(*app), std::move(premisses));
        ++res.steps;
    }
    res.closed = proof.closed();
    res.budget_exhausted = !res.closed && res.steps >= settings.budget;
    return res;
}

}  // namespace abside::prover
