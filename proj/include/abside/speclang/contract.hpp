#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/logic/sequent.hpp"
#include "abside/logic/term.hpp"
#include "abside/surface/typecheck.hpp"

namespace abside::speclang {

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

logic::Sort sort_of(const surface::TypeRef& t);

// An abstract clause name with its logical symbol. Requires and ensures
// placeholders and invariants are predicates, assignable placeholders are
// LocSet-valued functions.
struct Placeholder {
    std::string name;
    surface::PlaceholderKind kind = surface::PlaceholderKind::Requires;
    std::string cls;
    std::string method;  // empty for invariants
    logic::Sort result;
    std::vector<logic::Sort> arg_sorts;
};

// The formal program variables of a method contract.
struct ContractVars {
    logic::Term heap;      // heap
    logic::Term heap_pre;  // heapAtPre@C.m
    logic::Term self;      // self@C.m
    logic::Term result;    // result@C.m, invalid for void methods
    std::vector<logic::Term> params;
};

// Placeholder atom together with the term it stands for.
struct DefinitionClause {
    std::string placeholder;
    logic::Term atom;        // the placeholder applied to its formal program variables
    logic::Term definition;  // boolean, or LocSet for assignable placeholders
};

// placeholder(sv_1, ..., sv_n) ~> definition[formal_i := sv_i]
struct RewriteRule {
    std::string name;      // expand_def_<placeholder>
    std::string rule_set;  // expand_def, or class_invariant for invariant placeholders
    std::string placeholder;
    logic::Term lhs;
    logic::Term rhs;
    std::vector<logic::Term> schematics;

    bool matches(const logic::Term& t) const;
    // Instantiated right side for an occurrence; throws SpecError on mismatch.
    logic::Term apply(const logic::Term& occurrence) const;
};

struct Contract {
    std::string cls;
    std::string method;
    ContractVars vars;
    logic::Term pre;   // requires parts, then invariant of self
    logic::Term post;  // ensures parts, then invariant of self
    logic::Term mod;   // evaluated in the pre-state (reads heapAtPre)
    // Non-null conditions for self and reference parameters.
    logic::Term side;
    bool pre_abstract = false;
    bool post_abstract = false;
    bool mod_abstract = false;
    bool fully_abstract = false;
    std::vector<std::string> placeholders;  // in order of first occurrence
    // Canonical rendering of the clauses and the signature; a contract
    // application records its hash to detect changed callees on replay.
    std::string fingerprint;

    std::string id() const { return cls + "." + method; }
};

struct TranslationContext;

// Translated view of a type-checked program: placeholders, definitions,
// rewrite rules, invariants and contracts.
class SpecEnv {
public:
    explicit SpecEnv(surface::TypedProgram typed);

    const surface::TypedProgram& typed() const { return typed_; }
    const surface::Program& program() const { return *typed_.program; }

    const std::map<std::string, Placeholder>& placeholders() const { return placeholders_; }
    const Placeholder* find_placeholder(const std::string& name) const;
    const std::vector<DefinitionClause>& definitions() const { return definitions_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const RewriteRule* rule_for(const std::string& placeholder) const;

    ContractVars contract_vars(const std::string& cls, const std::string& method) const;
    // Class invariant of obj in heap: concrete conjuncts with self := obj and
    // I(heap, obj) atoms for abstract invariants. TRUE for classes without.
    logic::Term invariant_for(const std::string& cls, const logic::Term& obj, const logic::Term& heap) const;

    // Memoized build_contract for the first contract case of C.m.
    const Contract& contract(const std::string& cls, const std::string& method) const;

private:
    void build_placeholders();
    void build_definitions();

    surface::TypedProgram typed_;
    std::map<std::string, Placeholder> placeholders_;
    std::vector<DefinitionClause> definitions_;
    std::vector<RewriteRule> rules_;
    mutable std::map<std::string, std::unique_ptr<Contract>> contracts_;
};

// Where translated names point to.
struct TranslationContext {
    const SpecEnv* env = nullptr;
    std::string cls;
    logic::Term heap;
    logic::Term heap_pre;  // target of \old; invalid outside postconditions
    logic::Term self;
    logic::Term result;
    // Parameters and locals by source name; unknown locals become program
    // variables named as in the source.
    std::map<std::string, logic::Term> vars;
};

logic::Term translate_expression(const surface::ExprPtr& e, const TranslationContext& ctx);
// Union of the store-refs; local variables contribute no heap location.
logic::Term translate_store_refs(const std::vector<surface::ExprPtr>& refs, const TranslationContext& ctx);

// Fills defaults (requires true, ensures true, assignable \everything, or
// \nothing for pure methods). Abstract declarations are kept as they are.
surface::TextualSpec desugar(const surface::TextualSpec& spec, const surface::MethodDecl& m);

Contract build_contract(const SpecEnv& env, const std::string& cls, const std::string& method);

// Membership of a fully abstract contract in the abstract clause grammar:
// pre is a conjunction of requires and invariant atoms with at least one
// requires atom, post a conjunction of ensures and invariant atoms with at
// least one of each, mod a union of assignable atoms.
bool conforms_to_abstract_grammar(const SpecEnv& env, const logic::Term& pre, const logic::Term& post,
                                  const logic::Term& mod, std::string* why = nullptr);

RewriteRule definition_to_rewrite_rule(const SpecEnv& env, const DefinitionClause& d);

// Rewrites every placeholder occurrence (outside modalities) to a fixpoint.
logic::Term expand_all(const logic::Term& t, const std::vector<RewriteRule>& rules);

struct ProofObligation {
    std::shared_ptr<const SpecEnv> env;
    Contract contract;
    logic::Sequent initial;
    std::vector<RewriteRule> rules;

    std::string id() const { return contract.id(); }
};

// ==> (pre & side) -> {heapAtPre := heap || self := self@m || p := p@m}[body](post & frame)
ProofObligation build_proof_obligation(std::shared_ptr<const SpecEnv> env, const std::string& cls,
                                       const std::string& method);

// Splits "Class.method" and checks that the method exists.
std::pair<std::string, std::string> parse_selector(const surface::Program& p, const std::string& selector);

}  // namespace abside::speclang
