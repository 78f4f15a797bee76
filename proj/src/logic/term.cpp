#include "abside/logic/term.hpp"

#include <stdexcept>

#include "abside/surface/printer.hpp"

namespace abside::logic {

namespace {

std::size_t fnv(const std::string& s, std::size_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::size_t compute_hash(const Node& n) {
    std::size_t h = mix(static_cast<std::size_t>(n.op) * 131 + 7, fnv(n.sort.to_string()));
    if (!n.name.empty()) h = mix(h, fnv(n.name));
    h = mix(h, static_cast<std::size_t>(n.value));
    for (const auto& a : n.args) h = mix(h, a.hash());
    for (const auto& a : n.lhs) h = mix(h, a.hash() * 31);
    if (n.block) h = mix(h, n.block->hash);
    return h;
}

int cmp(const Term& a, const Term& b);

int cmp_vec(const std::vector<Term>& x, const std::vector<Term>& y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        int c = cmp(x[i], y[i]);
        if (c) return c;
    }
    return 0;
}

int cmp(const Term& a, const Term& b) {
    if (a.ptr() == b.ptr()) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    if (x.op != y.op) return x.op < y.op ? -1 : 1;
    if (x.value != y.value) return x.value < y.value ? -1 : 1;
    if (x.name != y.name) return x.name < y.name ? -1 : 1;
    if (x.sort != y.sort) return x.sort < y.sort ? -1 : 1;
    if (int c = cmp_vec(x.args, y.args)) return c;
    if (int c = cmp_vec(x.lhs, y.lhs)) return c;
    if (x.block || y.block) {
        if (!x.block || !y.block) return x.block ? 1 : -1;
        if (x.block->text != y.block->text) return x.block->text < y.block->text ? -1 : 1;
    }
    return 0;
}

}  // namespace

const char* op_name(Op op) {
    switch (op) {
    case Op::LVar: return "lvar";
    case Op::PVar: return "pvar";
    case Op::Func: return "func";
    case Op::IntLit: return "int";
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Null: return "null";
    case Op::FieldConst: return "field";
    case Op::Arr: return "arr";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Imp: return "imp";
    case Op::Iff: return "iff";
    case Op::Eq: return "eq";
    case Op::Lt: return "lt";
    case Op::Le: return "le";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Mod: return "mod";
    case Op::Neg: return "neg";
    case Op::Ite: return "ite";
    case Op::Forall: return "forall";
    case Op::Exists: return "exists";
    case Op::Select: return "select";
    case Op::Store: return "store";
    case Op::Anon: return "anon";
    case Op::Create: return "create";
    case Op::Empty: return "empty";
    case Op::AllLocs: return "allLocs";
    case Op::AllFields: return "allFields";
    case Op::Singleton: return "singleton";
    case Op::Union: return "union";
    case Op::Intersect: return "intersect";
    case Op::Setminus: return "setMinus";
    case Op::ElemOf: return "elementOf";
    case Op::Subset: return "subset";
    case Op::UpdApp: return "update";
    case Op::Box: return "box";
    case Op::Diamond: return "diamond";
    }
    return "?";
}

Op Term::op() const { return n_->op; }
const Sort& Term::sort() const { return n_->sort; }
std::size_t Term::hash() const { return n_->hash; }
const std::vector<Term>& Term::args() const { return n_->args; }
const Term& Term::arg(std::size_t i) const { return n_->args.at(i); }
const std::string& Term::name() const { return n_->name; }

bool operator==(const Term& a, const Term& b) {
    if (a.ptr() == b.ptr()) return true;
    if (!a.valid() || !b.valid()) return false;
    if (a.hash() != b.hash()) return false;
    return cmp(a, b) == 0;
}

bool operator<(const Term& a, const Term& b) {
    if (a.hash() != b.hash()) return a.hash() < b.hash();
    return cmp(a, b) < 0;
}

JavaBlockPtr make_block(std::vector<std::shared_ptr<const surface::Stmt>> stmts, MethodFrame frame) {
    auto b = std::make_shared<JavaBlock>();
    b->stmts = std::move(stmts);
    b->frame = std::move(frame);
    std::string head = "{" + b->frame.class_name + "::" + b->frame.method_name;
    if (b->frame.result.valid()) head += " -> " + b->frame.result.name();
    head += "}";
    std::string body = surface::print_stmts_inline(b->stmts);
    b->text = body.empty() ? head : head + " " + body;
    b->hash = fnv(b->text);
    return b;
}

Term make(Op op, Sort sort, std::vector<Term> args, std::string name, std::int64_t value) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->sort = std::move(sort);
    n->args = std::move(args);
    n->name = std::move(name);
    n->value = value;
    n->hash = compute_hash(*n);
    return Term(std::move(n));
}

namespace {
Term boolean_node(Op op, std::vector<Term> args) { return make(op, Sort::boolean(), std::move(args)); }

void require_formula(const Term& t, const char* where) {
    if (!t.sort().is_bool()) throw std::invalid_argument(std::string(where) + ": operand of sort " + t.sort().to_string() + " is not a formula");
}
void require_int(const Term& t, const char* where) {
    if (!t.sort().is_int()) throw std::invalid_argument(std::string(where) + ": operand of sort " + t.sort().to_string() + " is not int");
}
}  // namespace

Term lvar(const std::string& name, Sort sort) { return make(Op::LVar, std::move(sort), {}, name); }
Term pvar(const std::string& name, Sort sort) { return make(Op::PVar, std::move(sort), {}, name); }
Term func(const std::string& name, Sort sort, std::vector<Term> args) { return make(Op::Func, std::move(sort), std::move(args), name); }
Term int_lit(std::int64_t v) { return make(Op::IntLit, Sort::integer(), {}, {}, v); }
Term tt() {
    static const Term t = boolean_node(Op::True, {});
    return t;
}
Term ff() {
    static const Term t = boolean_node(Op::False, {});
    return t;
}
Term null_term() {
    static const Term t = make(Op::Null, Sort::null());
    return t;
}
Term field_const(const std::string& name) { return make(Op::FieldConst, Sort::field(), {}, name); }
Term arr(Term index) {
    require_int(index, "arr");
    return make(Op::Arr, Sort::field(), {std::move(index)});
}

Term not_(Term a) {
    require_formula(a, "not");
    return boolean_node(Op::Not, {std::move(a)});
}
Term and_(Term a, Term b) {
    require_formula(a, "and");
    require_formula(b, "and");
    return boolean_node(Op::And, {std::move(a), std::move(b)});
}
Term or_(Term a, Term b) {
    require_formula(a, "or");
    require_formula(b, "or");
    return boolean_node(Op::Or, {std::move(a), std::move(b)});
}
Term imp(Term a, Term b) {
    require_formula(a, "imp");
    require_formula(b, "imp");
    return boolean_node(Op::Imp, {std::move(a), std::move(b)});
}
Term iff(Term a, Term b) {
    require_formula(a, "iff");
    require_formula(b, "iff");
    return boolean_node(Op::Iff, {std::move(a), std::move(b)});
}
Term eq(Term a, Term b) { return boolean_node(Op::Eq, {std::move(a), std::move(b)}); }
Term lt(Term a, Term b) {
    require_int(a, "lt");
    require_int(b, "lt");
    return boolean_node(Op::Lt, {std::move(a), std::move(b)});
}
Term le(Term a, Term b) {
    require_int(a, "le");
    require_int(b, "le");
    return boolean_node(Op::Le, {std::move(a), std::move(b)});
}
Term gt(Term a, Term b) { return lt(std::move(b), std::move(a)); }
Term ge(Term a, Term b) { return le(std::move(b), std::move(a)); }

Term conj(const std::vector<Term>& fs) {
    if (fs.empty()) return tt();
    Term r = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) r = and_(fs[i], r);
    return r;
}
Term disj(const std::vector<Term>& fs) {
    if (fs.empty()) return ff();
    Term r = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) r = or_(fs[i], r);
    return r;
}

namespace {
Term arith(Op op, Term a, Term b, const char* what) {
    require_int(a, what);
    require_int(b, what);
    return make(op, Sort::integer(), {std::move(a), std::move(b)});
}
}  // namespace

Term add(Term a, Term b) { return arith(Op::Add, std::move(a), std::move(b), "add"); }
Term sub(Term a, Term b) { return arith(Op::Sub, std::move(a), std::move(b), "sub"); }
Term mul(Term a, Term b) { return arith(Op::Mul, std::move(a), std::move(b), "mul"); }
Term div_(Term a, Term b) { return arith(Op::Div, std::move(a), std::move(b), "div"); }
Term mod_(Term a, Term b) { return arith(Op::Mod, std::move(a), std::move(b), "mod"); }
Term neg(Term a) {
    require_int(a, "neg");
    return make(Op::Neg, Sort::integer(), {std::move(a)});
}

Term ite(Term c, Term a, Term b) {
    require_formula(c, "ite");
    Sort s = a.sort();
    if (a.sort() != b.sort()) {
        if (b.sort().is_subsort_of(a.sort())) {
            s = a.sort();
        } else if (a.sort().is_subsort_of(b.sort())) {
            s = b.sort();
        } else if (a.sort().is_reference() && b.sort().is_reference()) {
            s = Sort::object();
        } else {
            throw std::invalid_argument("ite branches of sorts " + a.sort().to_string() + " and " + b.sort().to_string());
        }
    }
    return make(Op::Ite, s, {std::move(c), std::move(a), std::move(b)});
}

Term forall(Term var, Term body) {
    if (var.op() != Op::LVar) throw std::invalid_argument("forall binds a logical variable");
    require_formula(body, "forall");
    return boolean_node(Op::Forall, {std::move(var), std::move(body)});
}
Term exists(Term var, Term body) {
    if (var.op() != Op::LVar) throw std::invalid_argument("exists binds a logical variable");
    require_formula(body, "exists");
    return boolean_node(Op::Exists, {std::move(var), std::move(body)});
}

Term select(Term heap, Term obj, Term field, Sort value_sort) {
    return make(Op::Select, std::move(value_sort), {std::move(heap), std::move(obj), std::move(field)});
}
Term store(Term heap, Term obj, Term field, Term value) {
    return make(Op::Store, Sort::heap(), {std::move(heap), std::move(obj), std::move(field), std::move(value)});
}
Term anon(Term heap, Term locs, Term anon_heap) {
    return make(Op::Anon, Sort::heap(), {std::move(heap), std::move(locs), std::move(anon_heap)});
}
Term create(Term heap, Term obj) { return make(Op::Create, Sort::heap(), {std::move(heap), std::move(obj)}); }

Term empty_set() {
    static const Term t = make(Op::Empty, Sort::locset());
    return t;
}
Term all_locs() {
    static const Term t = make(Op::AllLocs, Sort::locset());
    return t;
}
Term all_fields(Term obj) { return make(Op::AllFields, Sort::locset(), {std::move(obj)}); }
Term singleton(Term obj, Term field) { return make(Op::Singleton, Sort::locset(), {std::move(obj), std::move(field)}); }
Term set_union(Term a, Term b) { return make(Op::Union, Sort::locset(), {std::move(a), std::move(b)}); }
Term set_intersect(Term a, Term b) { return make(Op::Intersect, Sort::locset(), {std::move(a), std::move(b)}); }
Term set_minus(Term a, Term b) { return make(Op::Setminus, Sort::locset(), {std::move(a), std::move(b)}); }
Term elem_of(Term obj, Term field, Term locs) {
    return boolean_node(Op::ElemOf, {std::move(obj), std::move(field), std::move(locs)});
}
Term subset(Term a, Term b) { return boolean_node(Op::Subset, {std::move(a), std::move(b)}); }

Term upd_app(const Update& u, Term target) {
    if (u.empty()) return target;
    auto n = std::make_shared<Node>();
    n->op = Op::UpdApp;
    n->sort = target.sort();
    for (const auto& a : u) {
        if (a.lhs.op() != Op::PVar) throw std::invalid_argument("update target must be a program variable");
        n->lhs.push_back(a.lhs);
        n->args.push_back(a.rhs);
    }
    n->args.push_back(std::move(target));
    n->hash = compute_hash(*n);
    return Term(std::move(n));
}

Update update_of(const Term& t) {
    Update u;
    const Node& n = t.node();
    for (std::size_t i = 0; i < n.lhs.size(); ++i) u.push_back({n.lhs[i], n.args[i]});
    return u;
}

Term upd_target(const Term& t) { return t.node().args.back(); }

namespace {
Term modality(Op op, JavaBlockPtr block, Term post) {
    require_formula(post, "modality");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->sort = Sort::boolean();
    n->args.push_back(std::move(post));
    n->block = std::move(block);
    n->hash = compute_hash(*n);
    return Term(std::move(n));
}
}  // namespace

Term box(JavaBlockPtr block, Term post) { return modality(Op::Box, std::move(block), std::move(post)); }
Term diamond(JavaBlockPtr block, Term post) { return modality(Op::Diamond, std::move(block), std::move(post)); }

Term with_args(const Term& t, std::vector<Term> args) {
    const Node& o = t.node();
    if (args.size() != o.args.size()) throw std::invalid_argument("with_args: arity mismatch");
    bool same = true;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].ptr() != o.args[i].ptr()) {
            same = false;
            break;
        }
    }
    if (same) return t;
    auto n = std::make_shared<Node>(o);
    n->args = std::move(args);
    if (o.op == Op::Ite) {
        // Branch sorts may have been refined.
        return ite(n->args[0], n->args[1], n->args[2]);
    }
    if (o.op == Op::UpdApp) n->sort = n->args.back().sort();
    n->hash = compute_hash(*n);
    return Term(std::move(n));
}

bool is_modality(Op op) { return op == Op::Box || op == Op::Diamond; }

bool contains_modality(const Term& t) {
    bool found = false;
    visit(t, [&](const Term& s) {
        if (found) return false;
        if (is_modality(s.op())) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

bool contains_op(const Term& t, Op op) {
    bool found = false;
    visit(t, [&](const Term& s) {
        if (found) return false;
        if (s.op() == op) found = true;
        return !found;
    });
    return found;
}

bool is_int_literal(const Term& t, std::int64_t* v) {
    if (t.op() != Op::IntLit) return false;
    if (v) *v = t->value;
    return true;
}

void visit(const Term& t, const std::function<bool(const Term&)>& f) {
    if (!f(t)) return;
    for (const auto& a : t.args()) visit(a, f);
}

std::size_t term_size(const Term& t) {
    std::size_t n = 1;
    for (const auto& a : t.args()) n += term_size(a);
    return n;
}

const Term& subterm_at(const Term& t, const TermPath& path) {
    const Term* cur = &t;
    for (int i : path) {
        if (i < 0 || static_cast<std::size_t>(i) >= cur->args().size()) throw std::out_of_range("term path out of range");
        cur = &cur->args()[static_cast<std::size_t>(i)];
    }
    return *cur;
}

Term replace_at(const Term& t, const TermPath& path, Term replacement, std::size_t depth) {
    if (depth == path.size()) return replacement;
    auto i = static_cast<std::size_t>(path[depth]);
    if (i >= t.args().size()) throw std::out_of_range("term path out of range");
    std::vector<Term> args = t.args();
    args[i] = replace_at(args[i], path, std::move(replacement), depth + 1);
    return with_args(t, std::move(args));
}

}  // namespace abside::logic
