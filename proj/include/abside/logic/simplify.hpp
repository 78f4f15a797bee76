#pragma once

#include "abside/logic/term.hpp"

namespace abside::logic {

enum class Tri { No, Yes, Unknown };

// Syntactic decision of a = b: identical terms are equal; distinct literals,
// distinct Field constants, arr(i) vs a Field constant and arr(i) vs arr(j)
// with distinct literals are unequal. Everything else is Unknown.
Tri syntactic_equal(const Term& a, const Term& b);

// a = b with the syntactic decision applied and operands in canonical order.
Term eq_simp(const Term& a, const Term& b);

// Rewrites select over store/anon/create, anon over empty, location-set
// constructors and membership tests, to a fixpoint. Modalities are opaque.
Term simplify_heap(const Term& t);

// Normalizes a LocSet term: flattens unions, drops empty, removes duplicates.
Term locset_simplify(const Term& s);

// Decides (o,f) in s as far as the constructors of s allow.
Term membership(const Term& o, const Term& f, const Term& s);

// Propositional units, literal arithmetic, reflexive (in)equalities,
// conditional terms with decided conditions. Modalities are opaque.
Term simplify_formula(const Term& t);

// Same as the builders but with unit/absorption laws applied.
Term and_simp(const Term& a, const Term& b);
Term or_simp(const Term& a, const Term& b);
Term not_simp(const Term& a);
Term imp_simp(const Term& a, const Term& b);

// Java semantics for int division and remainder; zero divisors yield 0.
std::int64_t java_div(std::int64_t a, std::int64_t b);
std::int64_t java_mod(std::int64_t a, std::int64_t b);

}  // namespace abside::logic
