#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "abside/logic/term.hpp"

namespace abside::logic {

enum class Side { Ante, Succ };

// Address of a subterm: side, formula index, child path.
struct Position {
    Side side = Side::Succ;
    std::size_t index = 0;
    TermPath path;

    friend bool operator==(const Position& a, const Position& b) {
        return a.side == b.side && a.index == b.index && a.path == b.path;
    }
    // Antecedent before succedent, then index, then path.
    friend bool operator<(const Position& a, const Position& b);
};

// Renders as @A3/0/1 or @S0; parse_position is the inverse.
std::string to_string(const Position& p);
Position parse_position(const std::string& text);

// Gamma ==> Delta. Formulas keep their index until removed; additions are
// appended and duplicates on the same side are dropped.
class Sequent {
public:
    const std::vector<Term>& ante() const { return ante_; }
    const std::vector<Term>& succ() const { return succ_; }
    const std::vector<Term>& side(Side s) const { return s == Side::Ante ? ante_ : succ_; }

    const Term& at(Side s, std::size_t i) const { return side(s).at(i); }
    const Term& formula(const Position& p) const { return at(p.side, p.index); }

    // False when the formula was already present.
    bool add(Side s, const Term& f);
    // Replaces formula i; if the replacement already exists elsewhere on that
    // side, formula i is removed instead.
    void replace(Side s, std::size_t i, const Term& f);
    void remove(Side s, std::size_t i);
    bool contains(Side s, const Term& f) const;

    // Quantifier instantiations already performed, as (formula, term) hashes.
    bool instantiated(std::size_t formula_hash, std::size_t term_hash) const {
        return inst_.count({formula_hash, term_hash}) != 0;
    }
    void mark_instantiated(std::size_t formula_hash, std::size_t term_hash) { inst_.insert({formula_hash, term_hash}); }

    std::size_t formula_count() const { return ante_.size() + succ_.size(); }
    bool has_modality() const;

    std::string to_string() const;
    friend bool operator==(const Sequent& a, const Sequent& b) { return a.ante_ == b.ante_ && a.succ_ == b.succ_; }

private:
    std::vector<Term>& mut(Side s) { return s == Side::Ante ? ante_ : succ_; }
    std::vector<Term> ante_;
    std::vector<Term> succ_;
    std::set<std::pair<std::size_t, std::size_t>> inst_;
};

}  // namespace abside::logic
