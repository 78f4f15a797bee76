#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abside/logic/sequent.hpp"
#include "abside/prover/proof.hpp"

namespace abside::prover {

// Cost of a rule under the settings, smaller is preferred; nullopt means the
// rule is switched off. expand_def_<X> names share one cost.
std::optional<int> rule_cost(const std::string& rule, const Settings& s);

// Cheapest applicable rule for the goal; ties go to the smaller rule name,
// then the smaller position. nullopt when the goal is stuck.
std::optional<RuleApp> select_rule(const logic::Sequent& goal, const Proof& proof, const Settings& s);

// Premisses of applying app to goal. With `replay` set the recorded focus
// hash, instantiation and fresh names are checked and reused; otherwise they
// are filled in. Throws RuleError when the rule does not apply.
std::vector<logic::Sequent> apply_rule(const logic::Sequent& goal, RuleApp& app, Proof& proof, const Settings& s,
                                       bool replay = false);

}  // namespace abside::prover
