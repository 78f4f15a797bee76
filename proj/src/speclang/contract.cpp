#include "abside/speclang/contract.hpp"

#include <functional>
#include <map>
#include <set>

#include "abside/logic/syntax.hpp"
#include "abside/logic/update.hpp"

namespace abside::speclang {

using namespace abside::logic;
using surface::ExprKind;
using surface::Keyword;
using surface::NameKind;
using surface::PlaceholderKind;

Sort sort_of(const surface::TypeRef& t) {
    switch (t.kind) {
    case surface::TypeRef::Kind::Int: return Sort::integer();
    case surface::TypeRef::Kind::Bool: return Sort::boolean();
    case surface::TypeRef::Kind::IntArray: return Sort::int_array();
    case surface::TypeRef::Kind::BoolArray: return Sort::bool_array();
    case surface::TypeRef::Kind::Class: return Sort::of_class(t.cls);
    case surface::TypeRef::Kind::Null: return Sort::null();
    default: throw SpecError("type " + t.to_string() + " has no sort");
    }
}

namespace {

Term heap_var() { return pvar("heap", Sort::heap()); }

Term field_of(const std::string& owner, const std::string& name) { return field_const(owner + "::" + name); }

Term field_select(const Term& heap, const Term& obj, const surface::Expr& e) {
    if (e.is_length) return select(heap, obj, field_const("length"), Sort::integer());
    return select(heap, obj, field_of(e.owner, e.name), sort_of(e.type));
}

// Base of a decorated name: self@C.m -> self.
std::string base_name(const std::string& n) {
    auto at = n.find('@');
    return at == std::string::npos ? n : n.substr(0, at);
}

const surface::MethodDecl& find_method(const surface::Program& p, const std::string& cls, const std::string& method) {
    const surface::ClassDecl* c = p.find_class(cls);
    if (!c) throw SpecError("unknown class " + cls);
    const surface::MethodDecl* m = c->find_method(method);
    if (!m) throw SpecError("unknown method " + cls + "." + method);
    return *m;
}

}  // namespace

// ---- translation -------------------------------------------------------------

Term translate_expression(const surface::ExprPtr& ep, const TranslationContext& ctx) {
    const surface::Expr& e = *ep;
    auto rec = [&](const surface::ExprPtr& k) { return translate_expression(k, ctx); };
    switch (e.kind) {
    case ExprKind::IntLit: return int_lit(e.ival);
    case ExprKind::BoolLit: return e.bval ? tt() : ff();
    case ExprKind::Null: return null_term();
    case ExprKind::This: return ctx.self;
    case ExprKind::Result:
        if (!ctx.result.valid()) throw SpecError("\\result outside a postcondition");
        return ctx.result;
    case ExprKind::Name:
        switch (e.name_kind) {
        case NameKind::Constant: return int_lit(e.ival);
        case NameKind::Field: return field_select(ctx.heap, ctx.self, e);
        case NameKind::Bound: return lvar(e.name, sort_of(e.type));
        case NameKind::Local:
        case NameKind::Param: {
            auto it = ctx.vars.find(e.name);
            if (it != ctx.vars.end()) return it->second;
            return pvar(e.name, sort_of(e.type));
        }
        case NameKind::Unresolved: break;
        }
        throw SpecError("unresolved identifier " + e.name);
    case ExprKind::FieldAccess:
        if (e.name_kind == NameKind::Constant) return int_lit(e.ival);
        return field_select(ctx.heap, rec(e.receiver), e);
    case ExprKind::ArrayAccess:
        if (e.kids.empty()) throw SpecError("[*] outside an assignable clause");
        return select(ctx.heap, rec(e.receiver), arr(rec(e.kids[0])), sort_of(e.type));
    case ExprKind::Call:
        throw SpecError("method call " + e.name + " cannot be translated to a term");
    case ExprKind::Unary:
        return e.uop == surface::UnOp::Not ? not_(rec(e.kids[0])) : neg(rec(e.kids[0]));
    case ExprKind::Binary: {
        Term a = rec(e.kids[0]);
        Term b = rec(e.kids[1]);
        switch (e.bop) {
        case surface::BinOp::Add: return add(a, b);
        case surface::BinOp::Sub: return sub(a, b);
        case surface::BinOp::Mul: return mul(a, b);
        case surface::BinOp::Div: return div_(a, b);
        case surface::BinOp::Mod: return mod_(a, b);
        case surface::BinOp::Lt: return lt(a, b);
        case surface::BinOp::Le: return le(a, b);
        case surface::BinOp::Gt: return gt(a, b);
        case surface::BinOp::Ge: return ge(a, b);
        case surface::BinOp::Eq: return a.sort().is_bool() ? iff(a, b) : eq(a, b);
        case surface::BinOp::Ne: return not_(a.sort().is_bool() ? iff(a, b) : eq(a, b));
        case surface::BinOp::And: return and_(a, b);
        case surface::BinOp::Or: return or_(a, b);
        case surface::BinOp::Implies: return imp(a, b);
        case surface::BinOp::Equiv: return iff(a, b);
        }
        break;
    }
    case ExprKind::Cond: return ite(rec(e.kids[0]), rec(e.kids[1]), rec(e.kids[2]));
    case ExprKind::Old: {
        if (!ctx.heap_pre.valid()) throw SpecError("\\old outside a postcondition");
        TranslationContext inner = ctx;
        inner.heap = ctx.heap_pre;
        inner.heap_pre = Term();
        return translate_expression(e.receiver, inner);
    }
    case ExprKind::Quant: {
        Term v = lvar(e.name, sort_of(e.decl_type));
        Term guard = rec(e.kids[0]);
        Term body = rec(e.kids[1]);
        return e.forall ? forall(v, imp(guard, body)) : exists(v, and_(guard, body));
    }
    case ExprKind::InvariantFor:
        return ctx.env->invariant_for(e.receiver->type.cls, rec(e.receiver), ctx.heap);
    case ExprKind::Fresh: {
        if (!ctx.heap_pre.valid()) throw SpecError("\\fresh outside a postcondition");
        // Opaque: the object was not flagged as created in the pre-state.
        return not_(select(ctx.heap_pre, rec(e.receiver), field_const("Object::created"), Sort::boolean()));
    }
    case ExprKind::NewArray:
    case ExprKind::Everything:
    case ExprKind::Nothing:
        break;
    }
    throw SpecError("expression cannot be translated to a term");
}

Term translate_store_refs(const std::vector<surface::ExprPtr>& refs, const TranslationContext& ctx) {
    std::vector<Term> parts;
    for (const auto& r : refs) {
        switch (r->kind) {
        case ExprKind::Nothing: break;
        case ExprKind::Everything: parts.push_back(all_locs()); break;
        case ExprKind::Name:
            // Locals are not heap locations; the loop rule anonymizes them anyway.
            if (r->name_kind == NameKind::Field) parts.push_back(singleton(ctx.self, field_of(r->owner, r->name)));
            break;
        case ExprKind::FieldAccess:
            parts.push_back(singleton(translate_expression(r->receiver, ctx), field_of(r->owner, r->name)));
            break;
        case ExprKind::ArrayAccess: {
            Term a = translate_expression(r->receiver, ctx);
            parts.push_back(r->kids.empty() ? all_fields(a) : singleton(a, arr(translate_expression(r->kids[0], ctx))));
            break;
        }
        default: throw SpecError("not a store-ref");
        }
    }
    if (parts.empty()) return empty_set();
    Term u = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) u = set_union(parts[i], u);
    return u;
}

// ---- desugaring ----------------------------------------------------------------

surface::TextualSpec desugar(const surface::TextualSpec& spec, const surface::MethodDecl& m) {
    surface::TextualSpec out = spec;
    out.kind = surface::TextualSpec::Kind::Contract;
    // Concrete clauses of one keyword become one clause at the place of the
    // first: requires and ensures by conjunction, assignable by union.
    out.clauses.clear();
    std::map<Keyword, std::size_t> first;
    for (const auto& c : spec.clauses) {
        bool joinable = c.keyword == Keyword::Requires || c.keyword == Keyword::Ensures || c.keyword == Keyword::Assignable;
        auto it = first.find(c.keyword);
        if (!joinable || it == first.end()) {
            if (joinable) first[c.keyword] = out.clauses.size();
            out.clauses.push_back(c);
            continue;
        }
        surface::Clause& into = out.clauses[it->second];
        if (c.keyword == Keyword::Assignable) {
            into.text += ", " + c.text;
            into.exprs.insert(into.exprs.end(), c.exprs.begin(), c.exprs.end());
            continue;
        }
        into.text = "(" + into.text + ") && (" + c.text + ")";
        if (!into.exprs.empty() && !c.exprs.empty()) {
            auto both = std::make_shared<surface::Expr>();
            both->kind = ExprKind::Binary;
            both->bop = surface::BinOp::And;
            both->pos = into.exprs[0]->pos;
            both->type = surface::TypeRef::bool_();
            both->kids = {into.exprs[0], c.exprs[0]};
            into.exprs = {both};
        }
    }
    bool req = false, ens = false, mod = false, nothing_only = true;
    for (const auto& c : spec.clauses) {
        if (c.keyword == Keyword::Requires || c.keyword == Keyword::RequiresAbs) req = true;
        if (c.keyword == Keyword::Ensures || c.keyword == Keyword::EnsuresAbs) ens = true;
        if (c.keyword == Keyword::Assignable || c.keyword == Keyword::AssignableAbs) {
            mod = true;
            if (c.keyword == Keyword::AssignableAbs) nothing_only = false;
            for (const auto& e : c.exprs)
                if (e->kind != ExprKind::Nothing) nothing_only = false;
        }
    }
    if (m.pure && mod && !nothing_only)
        throw SpecError(m.cls + "." + m.name + ": pure method with an assignable clause other than \\nothing");
    auto clause = [](Keyword k, const std::string& text, surface::ExprPtr e) {
        surface::Clause c;
        c.keyword = k;
        c.text = text;
        c.exprs.push_back(std::move(e));
        return c;
    };
    auto truth = []() {
        auto e = std::make_shared<surface::Expr>();
        e->kind = ExprKind::BoolLit;
        e->bval = true;
        e->type = surface::TypeRef::bool_();
        return e;
    };
    if (!req) out.clauses.push_back(clause(Keyword::Requires, "true", truth()));
    if (!ens) out.clauses.push_back(clause(Keyword::Ensures, "true", truth()));
    if (!mod) {
        auto e = std::make_shared<surface::Expr>();
        e->kind = m.pure ? ExprKind::Nothing : ExprKind::Everything;
        e->type = surface::TypeRef::void_();
        out.clauses.push_back(clause(Keyword::Assignable, m.pure ? "\\nothing" : "\\everything", e));
    }
    return out;
}

// ---- environment -----------------------------------------------------------------

SpecEnv::SpecEnv(surface::TypedProgram typed) : typed_(std::move(typed)) {
    build_placeholders();
    build_definitions();
}

const Placeholder* SpecEnv::find_placeholder(const std::string& name) const {
    auto it = placeholders_.find(name);
    return it == placeholders_.end() ? nullptr : &it->second;
}

const RewriteRule* SpecEnv::rule_for(const std::string& placeholder) const {
    for (const auto& r : rules_)
        if (r.placeholder == placeholder) return &r;
    return nullptr;
}

ContractVars SpecEnv::contract_vars(const std::string& cls, const std::string& method) const {
    const surface::MethodDecl& m = find_method(program(), cls, method);
    ContractVars v;
    v.heap = heap_var();
    v.heap_pre = pvar(decorated("heapAtPre", cls, method), Sort::heap());
    v.self = pvar(decorated("self", cls, method), Sort::of_class(cls));
    if (m.ret.kind != surface::TypeRef::Kind::Void) v.result = pvar(decorated("result", cls, method), sort_of(m.ret));
    for (const auto& p : m.params) v.params.push_back(pvar(decorated(p.name, cls, method), sort_of(p.type)));
    return v;
}

void SpecEnv::build_placeholders() {
    for (const auto& [name, d] : typed_.placeholders) {
        Placeholder p;
        p.name = name;
        p.kind = d.kind;
        p.cls = d.cls;
        p.method = d.method;
        Sort self = Sort::of_class(d.cls);
        if (d.kind == PlaceholderKind::Invariant) {
            p.result = Sort::boolean();
            p.arg_sorts = {Sort::heap(), self};
        } else {
            const surface::MethodDecl& m = find_method(program(), d.cls, d.method);
            std::vector<Sort> params;
            for (const auto& q : m.params) params.push_back(sort_of(q.type));
            switch (d.kind) {
            case PlaceholderKind::Requires:
                p.result = Sort::boolean();
                p.arg_sorts = {Sort::heap(), self};
                break;
            case PlaceholderKind::Ensures:
                p.result = Sort::boolean();
                p.arg_sorts = {Sort::heap(), Sort::heap(), self};
                if (m.ret.kind != surface::TypeRef::Kind::Void) p.arg_sorts.push_back(sort_of(m.ret));
                break;
            case PlaceholderKind::Assignable:
                p.result = Sort::locset();
                p.arg_sorts = {Sort::heap(), self};
                break;
            case PlaceholderKind::Invariant: break;
            }
            p.arg_sorts.insert(p.arg_sorts.end(), params.begin(), params.end());
        }
        placeholders_.emplace(name, std::move(p));
    }
}

namespace {

Term placeholder_atom(const Placeholder& p, const ContractVars& v) {
    std::vector<Term> args;
    switch (p.kind) {
    case PlaceholderKind::Requires: args = {v.heap, v.self}; break;
    case PlaceholderKind::Ensures:
        args = {v.heap, v.heap_pre, v.self};
        if (v.result.valid()) args.push_back(v.result);
        break;
    case PlaceholderKind::Assignable: args = {v.heap_pre, v.self}; break;
    case PlaceholderKind::Invariant: return func(p.name, p.result, {v.heap, v.self});
    }
    args.insert(args.end(), v.params.begin(), v.params.end());
    return func(p.name, p.result, std::move(args));
}

TranslationContext clause_context(const SpecEnv& env, const std::string& cls, const ContractVars& v,
                                  const surface::MethodDecl* m, PlaceholderKind kind) {
    TranslationContext ctx;
    ctx.env = &env;
    ctx.cls = cls;
    ctx.heap = kind == PlaceholderKind::Assignable ? v.heap_pre : v.heap;
    ctx.self = v.self;
    if (kind == PlaceholderKind::Ensures) {
        ctx.heap_pre = v.heap_pre;
        ctx.result = v.result;
    }
    if (m) {
        for (std::size_t i = 0; i < m->params.size(); ++i) ctx.vars[m->params[i].name] = v.params[i];
    }
    return ctx;
}

}  // namespace

void SpecEnv::build_definitions() {
    // Iterate in declaration order so that rule numbering is stable.
    for (const auto& c : program().classes) {
        for (const auto& s : c.specs) {
            for (const auto& cl : s.clauses) {
                if (cl.keyword != Keyword::Def) continue;
                const Placeholder* p = find_placeholder(cl.ident);
                if (!p) throw SpecError("def for undeclared placeholder " + cl.ident);
                ContractVars v;
                const surface::MethodDecl* m = nullptr;
                if (p->kind == PlaceholderKind::Invariant) {
                    v.heap = heap_var();
                    v.self = pvar("self", Sort::of_class(p->cls));
                } else {
                    m = &find_method(program(), p->cls, p->method);
                    v = contract_vars(p->cls, p->method);
                }
                TranslationContext ctx = clause_context(*this, p->cls, v, m, p->kind);
                DefinitionClause d;
                d.placeholder = p->name;
                d.atom = placeholder_atom(*p, v);
                d.definition = p->kind == PlaceholderKind::Assignable ? translate_store_refs(cl.exprs, ctx)
                                                                       : translate_expression(cl.exprs.at(0), ctx);
                if (d.definition.sort() != p->result)
                    throw SpecError("def " + p->name + " has sort " + d.definition.sort().to_string() + ", expected " +
                                    p->result.to_string());
                definitions_.push_back(d);
            }
        }
    }
    for (const auto& d : definitions_) rules_.push_back(definition_to_rewrite_rule(*this, d));
}

Term SpecEnv::invariant_for(const std::string& cls, const Term& obj, const Term& heap) const {
    const surface::ClassDecl* c = program().find_class(cls);
    if (!c) throw SpecError("unknown class " + cls);
    std::vector<Term> parts;
    for (const auto& s : c->specs) {
        for (const auto& cl : s.clauses) {
            if (cl.keyword == Keyword::Invariant) {
                TranslationContext ctx;
                ctx.env = this;
                ctx.cls = cls;
                ctx.heap = heap;
                ctx.self = obj;
                parts.push_back(translate_expression(cl.exprs.at(0), ctx));
            } else if (cl.keyword == Keyword::InvariantAbs) {
                parts.push_back(func(cl.ident, Sort::boolean(), {heap, obj}));
            }
        }
    }
    return conj(parts);
}

const Contract& SpecEnv::contract(const std::string& cls, const std::string& method) const {
    std::string key = cls + "." + method;
    auto it = contracts_.find(key);
    if (it != contracts_.end()) return *it->second;
    auto c = std::make_unique<Contract>(build_contract(*this, cls, method));
    return *contracts_.emplace(key, std::move(c)).first->second;
}

// ---- contracts -------------------------------------------------------------------

namespace {

void flatten(const Term& t, Op op, std::vector<Term>& out) {
    if (t.op() == op) {
        flatten(t.arg(0), op, out);
        flatten(t.arg(1), op, out);
    } else {
        out.push_back(t);
    }
}

bool is_placeholder_atom(const SpecEnv& env, const Term& t, PlaceholderKind k) {
    if (t.op() != Op::Func) return false;
    const Placeholder* p = env.find_placeholder(t.name());
    return p && p->kind == k;
}

void collect_placeholders(const SpecEnv& env, const Term& t, std::vector<std::string>& out) {
    visit(t, [&](const Term& s) {
        if (s.op() == Op::Func && env.find_placeholder(s.name())) {
            bool seen = false;
            for (const auto& n : out) seen = seen || n == s.name();
            if (!seen) out.push_back(s.name());
        }
        return true;
    });
}

std::string signature_text(const surface::MethodDecl& m) {
    std::string s = m.cls + "." + m.name + "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) s += (i ? ", " : "") + m.params[i].type.to_string() + " " + m.params[i].name;
    return s + "): " + m.ret.to_string();
}

}  // namespace

bool conforms_to_abstract_grammar(const SpecEnv& env, const Term& pre, const Term& post, const Term& mod,
                                  std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::vector<Term> parts;
    flatten(pre, Op::And, parts);
    int req = 0;
    for (const auto& p : parts) {
        if (is_placeholder_atom(env, p, PlaceholderKind::Requires)) {
            ++req;
        } else if (!is_placeholder_atom(env, p, PlaceholderKind::Invariant)) {
            return fail("precondition conjunct " + to_string(p) + " is not a requires or invariant placeholder");
        }
    }
    if (req == 0) return fail("precondition has no requires placeholder");
    parts.clear();
    flatten(post, Op::And, parts);
    int ens = 0, inv = 0;
    for (const auto& p : parts) {
        if (is_placeholder_atom(env, p, PlaceholderKind::Ensures)) {
            ++ens;
        } else if (is_placeholder_atom(env, p, PlaceholderKind::Invariant)) {
            ++inv;
        } else {
            return fail("postcondition conjunct " + to_string(p) + " is not an ensures or invariant placeholder");
        }
    }
    if (ens == 0) return fail("postcondition has no ensures placeholder");
    if (inv == 0) return fail("postcondition has no invariant placeholder");
    parts.clear();
    flatten(mod, Op::Union, parts);
    for (const auto& p : parts) {
        if (!is_placeholder_atom(env, p, PlaceholderKind::Assignable))
            return fail("assignable part " + to_string(p) + " is not an assignable placeholder");
    }
    return true;
}

Contract build_contract(const SpecEnv& env, const std::string& cls, const std::string& method) {
    const surface::MethodDecl& m = find_method(env.program(), cls, method);
    surface::TextualSpec raw;
    for (const auto& s : m.specs) {
        if (s.kind == surface::TextualSpec::Kind::Contract) {
            raw = s;
            break;
        }
    }
    surface::TextualSpec spec = desugar(raw, m);

    Contract c;
    c.cls = cls;
    c.method = method;
    c.vars = env.contract_vars(cls, method);
    std::vector<Term> pre, post, mod;
    bool concrete = false;
    for (const auto& cl : spec.clauses) {
        switch (cl.keyword) {
        case Keyword::Requires:
            pre.push_back(translate_expression(cl.exprs.at(0), clause_context(env, cls, c.vars, &m, PlaceholderKind::Requires)));
            concrete = true;
            break;
        case Keyword::Ensures:
            post.push_back(translate_expression(cl.exprs.at(0), clause_context(env, cls, c.vars, &m, PlaceholderKind::Ensures)));
            concrete = true;
            break;
        case Keyword::Assignable:
            mod.push_back(translate_store_refs(cl.exprs, clause_context(env, cls, c.vars, &m, PlaceholderKind::Assignable)));
            concrete = true;
            break;
        case Keyword::RequiresAbs:
        case Keyword::EnsuresAbs:
        case Keyword::AssignableAbs: {
            const Placeholder* p = env.find_placeholder(cl.ident);
            if (!p) throw SpecError("undeclared placeholder " + cl.ident);
            Term a = placeholder_atom(*p, c.vars);
            if (cl.keyword == Keyword::RequiresAbs) {
                pre.push_back(a);
                c.pre_abstract = true;
            } else if (cl.keyword == Keyword::EnsuresAbs) {
                post.push_back(a);
                c.post_abstract = true;
            } else {
                mod.push_back(a);
                c.mod_abstract = true;
            }
            break;
        }
        default:
            break;
        }
    }
    auto without_true = [](std::vector<Term> v) {
        std::vector<Term> out;
        for (auto& t : v)
            if (t.op() != Op::True) out.push_back(std::move(t));
        return out;
    };
    pre = without_true(pre);
    post = without_true(post);
    std::vector<Term> inv;
    flatten(env.invariant_for(cls, c.vars.self, c.vars.heap), Op::And, inv);
    inv = without_true(inv);
    pre.insert(pre.end(), inv.begin(), inv.end());
    post.insert(post.end(), inv.begin(), inv.end());
    c.pre = conj(pre);
    c.post = conj(post);
    std::vector<Term> mods;
    for (const auto& t : mod)
        if (t.op() != Op::Empty) mods.push_back(t);
    if (mods.empty()) {
        c.mod = empty_set();
    } else {
        c.mod = mods.back();
        for (std::size_t i = mods.size() - 1; i-- > 0;) c.mod = set_union(mods[i], c.mod);
    }
    std::vector<Term> side{not_(eq(c.vars.self, null_term()))};
    for (const auto& p : c.vars.params)
        if (p.sort().is_reference()) side.push_back(not_(eq(p, null_term())));
    c.side = conj(side);

    c.fully_abstract = c.pre_abstract && c.post_abstract && c.mod_abstract && !concrete;
    if (c.fully_abstract) {
        std::string why;
        if (!conforms_to_abstract_grammar(env, c.pre, c.post, c.mod, &why))
            throw SpecError(c.id() + ": abstract contract violates the clause grammar: " + why);
    }
    collect_placeholders(env, c.pre, c.placeholders);
    collect_placeholders(env, c.post, c.placeholders);
    collect_placeholders(env, c.mod, c.placeholders);
    c.fingerprint = signature_text(m) + "\npre " + to_string(c.pre) + "\npost " + to_string(c.post) + "\nmod " + to_string(c.mod);
    return c;
}

// ---- rewrite rules -----------------------------------------------------------------

RewriteRule definition_to_rewrite_rule(const SpecEnv& env, const DefinitionClause& d) {
    const Placeholder* p = env.find_placeholder(d.placeholder);
    RewriteRule r;
    r.name = "expand_def_" + d.placeholder;
    r.rule_set = p && p->kind == PlaceholderKind::Invariant ? "class_invariant" : "expand_def";
    r.placeholder = d.placeholder;
    Update to_schematic;
    for (const auto& formal : d.atom.args()) {
        Term sv = lvar("sv_" + base_name(formal.name()), formal.sort());
        r.schematics.push_back(sv);
        to_schematic.push_back({formal, sv});
    }
    r.lhs = func(d.placeholder, d.atom.sort(), r.schematics);
    r.rhs = apply_update(to_schematic, d.definition);
    return r;
}

bool RewriteRule::matches(const Term& t) const {
    return t.op() == Op::Func && t.name() == placeholder && t.args().size() == schematics.size();
}

Term RewriteRule::apply(const Term& occurrence) const {
    if (!matches(occurrence)) throw SpecError(name + " does not match " + to_string(occurrence));
    Term out = rhs;
    for (std::size_t i = 0; i < schematics.size(); ++i) out = substitute(out, schematics[i], occurrence.arg(i));
    return out;
}

Term expand_all(const Term& t, const std::vector<RewriteRule>& rules) {
    std::function<Term(const Term&)> go = [&](const Term& s) -> Term {
        if (is_modality(s.op())) return s;
        if (s.op() == Op::Func) {
            for (const auto& r : rules)
                if (r.matches(s)) return go(r.apply(s));
        }
        if (s.args().empty()) return s;
        std::vector<Term> args;
        for (const auto& a : s.args()) args.push_back(go(a));
        return with_args(s, std::move(args));
    };
    return go(t);
}

// ---- proof obligations ------------------------------------------------------------

ProofObligation build_proof_obligation(std::shared_ptr<const SpecEnv> env, const std::string& cls,
                                       const std::string& method) {
    const surface::MethodDecl& m = find_method(env->program(), cls, method);
    ProofObligation po;
    po.env = env;
    po.contract = env->contract(cls, method);
    const Contract& c = po.contract;
    for (const auto& name : c.placeholders) {
        if (!env->rule_for(name)) throw SpecError("placeholder " + name + " has no def clause");
    }
    po.rules = env->rules();

    std::vector<std::shared_ptr<const surface::Stmt>> body(m.body.begin(), m.body.end());
    JavaBlockPtr block = make_block(std::move(body), MethodFrame{cls, method, c.vars.result});

    Update init{{c.vars.heap_pre, c.vars.heap}, {pvar("self", Sort::of_class(cls)), c.vars.self}};
    for (std::size_t i = 0; i < m.params.size(); ++i) init.push_back({pvar(m.params[i].name, sort_of(m.params[i].type)), c.vars.params[i]});

    Term o = lvar("o", Sort::object());
    Term f = lvar("f", Sort::field());
    Term frame = forall(o, forall(f, or_(elem_of(o, f, c.mod), eq(select(c.vars.heap, o, f, Sort::any()),
                                                                   select(c.vars.heap_pre, o, f, Sort::any())))));
    Term goal = imp(and_(c.pre, c.side), upd_app(init, box(block, and_(c.post, frame))));
    po.initial.add(Side::Succ, goal);
    return po;
}

std::pair<std::string, std::string> parse_selector(const surface::Program& p, const std::string& selector) {
    std::string sel = selector;
    auto hash = sel.find('#');
    if (hash != std::string::npos) {
        if (sel.substr(hash + 1) != "0") throw SpecError("only the first contract case (#0) is supported");
        sel = sel.substr(0, hash);
    }
    auto dot = sel.find('.');
    if (dot == std::string::npos) throw SpecError("contract selector must be Class.method");
    std::string cls = sel.substr(0, dot);
    std::string method = sel.substr(dot + 1);
    find_method(p, cls, method);
    return {cls, method};
}

}  // namespace abside::speclang
