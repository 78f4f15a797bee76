#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abside/logic/sequent.hpp"
#include "abside/prover/proof.hpp"

namespace abside::prover::detail {

// Hands out fresh names: generated during automatic runs, taken from the
// recorded application during replay.
class Names {
public:
    Names(Proof& proof, const std::vector<std::string>* recorded) : proof_(proof), recorded_(recorded) {}

    std::string take(const std::string& prefix);
    void finish() const;  // replay: every recorded name must have been consumed
    const std::vector<std::string>& used() const { return used_; }

private:
    Proof& proof_;
    const std::vector<std::string>* recorded_;
    std::size_t next_ = 0;
    std::vector<std::string> used_;
};

// Name of the symbolic execution rule (including methodContract and
// loopInvariant) that applies to a succedent formula, if any.
std::optional<std::string> symexec_rule(const logic::Term& f);

std::vector<logic::Sequent> apply_symexec(const logic::Sequent& seq, const logic::Position& pos, const std::string& rule,
                                          RuleApp& app, Names& names, const speclang::ProofObligation& po,
                                          const Settings& settings);

// Memoized rewriting of a whole formula.
logic::Term simplify_updates(const logic::Term& t);
logic::Term cached_simplify_heap(const logic::Term& t);
logic::Term cached_simplify_formula(const logic::Term& t);

}  // namespace abside::prover::detail
