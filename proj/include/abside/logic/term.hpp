#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "abside/logic/sort.hpp"

namespace abside::surface {
struct Stmt;
}

namespace abside::logic {

enum class Op : std::uint8_t {
    // atoms
    LVar,
    PVar,
    Func,
    IntLit,
    True,
    False,
    Null,
    FieldConst,
    Arr,
    // connectives and predicates
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    Lt,
    Le,
    // arithmetic
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Neg,
    Ite,
    Forall,
    Exists,
    // heap
    Select,
    Store,
    Anon,
    Create,
    // location sets
    Empty,
    AllLocs,
    AllFields,
    Singleton,
    Union,
    Intersect,
    Setminus,
    ElemOf,
    Subset,
    // state change
    UpdApp,
    Box,
    Diamond,
};

const char* op_name(Op op);

class Term;
struct Node;
struct JavaBlock;

// Structurally compared, immutable, cheap to copy.
class Term {
public:
    Term() = default;
    explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    bool valid() const { return static_cast<bool>(n_); }
    const Node& node() const { return *n_; }
    const Node* operator->() const { return n_.get(); }
    const Node* ptr() const { return n_.get(); }

    Op op() const;
    const Sort& sort() const;
    std::size_t hash() const;
    const std::vector<Term>& args() const;
    const Term& arg(std::size_t i) const;
    const std::string& name() const;
    bool is_formula() const { return sort().is_bool(); }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    // Total order used for deterministic containers: hash, then structure.
    friend bool operator<(const Term& a, const Term& b);

private:
    std::shared_ptr<const Node> n_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// One elementary assignment of a parallel update.
struct Assignment {
    Term lhs;  // program variable
    Term rhs;
};
// Parallel update u1 || u2 || ... in left-to-right order.
using Update = std::vector<Assignment>;

// Method frame of a modality: return assigns `result`.
struct MethodFrame {
    std::string class_name;
    std::string method_name;
    Term result;  // invalid for void methods
};

// Statement list of a box modality together with its method frame.
struct JavaBlock {
    std::vector<std::shared_ptr<const surface::Stmt>> stmts;
    MethodFrame frame;
    std::string text;  // canonical rendering, used for equality and hashing
    std::size_t hash = 0;
};
using JavaBlockPtr = std::shared_ptr<const JavaBlock>;

JavaBlockPtr make_block(std::vector<std::shared_ptr<const surface::Stmt>> stmts, MethodFrame frame);

struct Node {
    Op op = Op::True;
    Sort sort;
    std::string name;            // symbol / variable / field name
    std::int64_t value = 0;      // integer literal
    std::vector<Term> args;      // children; for UpdApp: rhs..., target
    std::vector<Term> lhs;       // UpdApp: assigned program variables
    JavaBlockPtr block;          // Box / Diamond
    std::size_t hash = 0;
};

// ---- construction ------------------------------------------------------

Term make(Op op, Sort sort, std::vector<Term> args = {}, std::string name = {}, std::int64_t value = 0);

Term lvar(const std::string& name, Sort sort);
Term pvar(const std::string& name, Sort sort);
Term func(const std::string& name, Sort sort, std::vector<Term> args = {});
Term int_lit(std::int64_t v);
Term tt();
Term ff();
Term null_term();
Term field_const(const std::string& name);
Term arr(Term index);

Term not_(Term a);
Term and_(Term a, Term b);
Term or_(Term a, Term b);
Term imp(Term a, Term b);
Term iff(Term a, Term b);
Term eq(Term a, Term b);
Term lt(Term a, Term b);
Term le(Term a, Term b);
Term gt(Term a, Term b);
Term ge(Term a, Term b);
// Right-nested conjunction/disjunction; empty list yields TRUE/FALSE.
Term conj(const std::vector<Term>& fs);
Term disj(const std::vector<Term>& fs);

Term add(Term a, Term b);
Term sub(Term a, Term b);
Term mul(Term a, Term b);
Term div_(Term a, Term b);
Term mod_(Term a, Term b);
Term neg(Term a);
Term ite(Term c, Term a, Term b);
Term forall(Term var, Term body);
Term exists(Term var, Term body);

Term select(Term heap, Term obj, Term field, Sort value_sort);
Term store(Term heap, Term obj, Term field, Term value);
Term anon(Term heap, Term locs, Term anon_heap);
Term create(Term heap, Term obj);

Term empty_set();
Term all_locs();
Term all_fields(Term obj);
Term singleton(Term obj, Term field);
Term set_union(Term a, Term b);
Term set_intersect(Term a, Term b);
Term set_minus(Term a, Term b);
Term elem_of(Term obj, Term field, Term locs);
Term subset(Term a, Term b);

// Applies u to target; an empty update returns target unchanged.
Term upd_app(const Update& u, Term target);
Update update_of(const Term& upd_app_term);
Term upd_target(const Term& upd_app_term);
Term box(JavaBlockPtr block, Term post);
Term diamond(JavaBlockPtr block, Term post);

// Rebuilds a node of the same shape with new children.
Term with_args(const Term& t, std::vector<Term> args);

// ---- inspection ------------------------------------------------------

bool is_modality(Op op);
bool contains_modality(const Term& t);
bool contains_op(const Term& t, Op op);
bool is_int_literal(const Term& t, std::int64_t* v = nullptr);
// Pre-order traversal; visitor returns false to skip the children.
void visit(const Term& t, const std::function<bool(const Term&)>& f);
std::size_t term_size(const Term& t);

// Subterm addressing: child indices from the root.
using TermPath = std::vector<int>;
const Term& subterm_at(const Term& t, const TermPath& path);
Term replace_at(const Term& t, const TermPath& path, Term replacement, std::size_t depth = 0);

}  // namespace abside::logic

template <>
struct std::hash<abside::logic::Term> {
    std::size_t operator()(const abside::logic::Term& t) const { return t.hash(); }
};
