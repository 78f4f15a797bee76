#pragma once

#include <set>
#include <string>
#include <vector>

#include "abside/logic/term.hpp"

namespace abside::surface {
struct Stmt;
}

namespace abside::logic {

// Name of a contract program variable, e.g. self@Account.update.
std::string decorated(const std::string& base, const std::string& cls, const std::string& method);

// Keeps one assignment per program variable: the right-most right side wins
// and takes the slot of the variable's first occurrence.
Update simplify_parallel(const Update& u);

// Substitutes u into target. Descends through everything except modalities,
// in front of which the (composed) update is kept.
Term apply_update(const Update& u, const Term& target);

// The single update equivalent to {u}{v}.
Update compose(const Update& u, const Update& v);

// Drops assignments whose left side does not occur in target.
Update prune(const Update& u, const Term& target);

std::set<std::string> free_program_variables(const Term& t);
std::set<std::string> free_program_variables(const Update& u);
// Names read or written by the statements; `this` and implicit field access
// contribute self, heap access contributes heap.
std::set<std::string> free_program_variables(const std::vector<std::shared_ptr<const surface::Stmt>>& stmts);

// Local variables assigned anywhere in the statements (loop anonymization).
std::vector<std::string> assigned_locals(const std::vector<std::shared_ptr<const surface::Stmt>>& stmts);

// Free logical variables of t.
std::set<std::string> free_logical_variables(const Term& t);

// Replaces free occurrences of the logical variable v by s (capture-avoiding).
Term substitute(const Term& t, const Term& v, const Term& s);

}  // namespace abside::logic
