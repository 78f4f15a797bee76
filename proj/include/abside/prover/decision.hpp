#pragma once

#include <vector>

#include "abside/logic/term.hpp"

namespace abside::prover {

// Ground atoms the decision procedure understands: equalities, comparisons,
// boolean-valued applications and program variables, membership tests and
// equivalences between atoms. Formulas with binders, updates or modalities
// are not literals.
bool is_literal(const logic::Term& f);

struct DecisionLimits {
    int max_fm_constraints = 4000;
    int max_disequality_splits = 8;
    int max_propagation_tests = 48;
};

// True when the assumptions (antecedent literals hold, succedent literals
// fail) are contradictory. Congruence closure with interpreted constants,
// Fourier-Motzkin over the integer classes with gcd tightening, and
// propagation of implied integer equalities into the congruence. Giving up
// answers false, so a true answer is always sound.
bool refute(const std::vector<logic::Term>& ante, const std::vector<logic::Term>& succ,
            const DecisionLimits& limits = {});

}  // namespace abside::prover
