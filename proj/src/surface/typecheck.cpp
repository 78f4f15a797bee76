#include "abside/surface/typecheck.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "abside/surface/parser.hpp"

namespace abside::surface {

std::string TypeError::to_string() const {
    return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
}

const char* placeholder_kind_text(PlaceholderKind k) {
    switch (k) {
    case PlaceholderKind::Requires: return "requires";
    case PlaceholderKind::Ensures: return "ensures";
    case PlaceholderKind::Assignable: return "assignable";
    case PlaceholderKind::Invariant: return "invariant";
    }
    return "?";
}

const ClassDecl& TypedProgram::cls(const std::string& name) const {
    const ClassDecl* c = program->find_class(name);
    if (!c) throw std::invalid_argument("unknown class '" + name + "'");
    return *c;
}

const MethodDecl& TypedProgram::method(const std::string& c, const std::string& name) const {
    const MethodDecl* m = cls(c).find_method(name);
    if (!m) throw std::invalid_argument("unknown method '" + c + "." + name + "'");
    return *m;
}

namespace {

struct Ctx {
    const ClassDecl* cls = nullptr;
    const MethodDecl* method = nullptr;
    bool code = false;         // executable code: calls allowed, locals in scope
    bool allow_result = false;
    bool allow_old = false;
    bool allow_params = true;
    bool store_refs = false;   // \nothing, \everything, a[*] allowed at top level
    std::vector<std::pair<std::string, TypeRef>> scope;  // locals and bound variables
};

bool assignable_to(const TypeRef& target, const TypeRef& value) {
    if (target.kind == TypeRef::Kind::Error || value.kind == TypeRef::Kind::Error) return true;
    if (target == value) return true;
    return target.is_reference() && value.kind == TypeRef::Kind::Null;
}

bool comparable(const TypeRef& a, const TypeRef& b) {
    if (a.kind == TypeRef::Kind::Error || b.kind == TypeRef::Kind::Error) return true;
    if (a == b) return true;
    if (a.is_reference() && b.is_reference()) {
        return a.kind == TypeRef::Kind::Null || b.kind == TypeRef::Kind::Null;
    }
    return false;
}

class Checker {
public:
    explicit Checker(Program& p) : prog_(p) {}

    std::vector<TypeError> errors;
    std::map<std::string, PlaceholderDecl> placeholders;

    void error(SourcePos p, std::string msg) { errors.push_back({p, std::move(msg)}); }

    void run() {
        declarations();
        collect_placeholders();
        for (auto& c : prog_.classes) check_class(c);
    }

    // ---- declarations ----------------------------------------------------

    bool valid_type(const TypeRef& t) {
        return t.kind != TypeRef::Kind::Class || prog_.find_class(t.cls) != nullptr;
    }

    void declarations() {
        for (auto& c : prog_.classes) {
            std::set<std::string> names;
            for (auto& f : c.fields) {
                if (!valid_type(f.type)) error(f.pos, "field '" + f.name + "' has undeclared class type " + f.type.cls);
                if (!names.insert(f.name).second) error(f.pos, "duplicate member name '" + f.name + "'");
            }
            for (auto& m : c.methods) {
                if (!valid_type(m.ret)) error(m.pos, "method '" + m.name + "' returns undeclared class " + m.ret.cls);
                for (auto& p : m.params)
                    if (!valid_type(p.type)) error(m.pos, "parameter '" + p.name + "' has undeclared class type " + p.type.cls);
            }
        }
    }

    void declare(const Clause& cl, PlaceholderKind k, const ClassDecl& c, const MethodDecl* m) {
        auto it = placeholders.find(cl.ident);
        if (it != placeholders.end()) {
            error(cl.pos, "placeholder '" + cl.ident + "' declared twice");
            return;
        }
        placeholders[cl.ident] = {cl.ident, k, c.name, m ? m->name : std::string(), cl.pos};
    }

    void collect_placeholders() {
        for (auto& c : prog_.classes) {
            for (auto& s : c.specs)
                for (auto& cl : s.clauses)
                    if (cl.keyword == Keyword::InvariantAbs) declare(cl, PlaceholderKind::Invariant, c, nullptr);
            for (auto& m : c.methods) {
                for (std::size_t si = 0; si < m.specs.size(); ++si) {
                    for (auto& cl : m.specs[si].clauses) {
                        if (cl.keyword == Keyword::RequiresAbs) declare(cl, PlaceholderKind::Requires, c, &m);
                        if (cl.keyword == Keyword::EnsuresAbs) declare(cl, PlaceholderKind::Ensures, c, &m);
                        if (cl.keyword == Keyword::AssignableAbs) declare(cl, PlaceholderKind::Assignable, c, &m);
                    }
                }
            }
        }
    }

    // ---- clauses ------------------------------------------------------------

    void parse_clause(Clause& cl, bool refs, Ctx& ctx, const TypeRef& expected) {
        cl.exprs.clear();
        try {
            if (refs) {
                cl.exprs = parse_store_refs(cl.text, cl.pos);
            } else {
                cl.exprs.push_back(parse_expression(cl.text, cl.pos));
            }
        } catch (const SyntaxError& e) {
            error(e.pos, std::string("in ") + keyword_text(cl.keyword) + " clause: " + e.what());
            return;
        }
        if (refs) {
            for (auto& e : cl.exprs) store_ref(e, ctx);
            return;
        }
        TypeRef t = expr(cl.exprs[0], ctx);
        if (!assignable_to(expected, t))
            error(cl.pos, std::string(keyword_text(cl.keyword)) + " clause must be " + expected.to_string() + ", found " + t.to_string());
    }

    Ctx clause_ctx(const ClassDecl& c, const MethodDecl* m) {
        Ctx ctx;
        ctx.cls = &c;
        ctx.method = m;
        return ctx;
    }

    void check_class(ClassDecl& c) {
        std::set<std::string> defined;
        for (auto& s : c.specs) {
            for (auto& cl : s.clauses) {
                if (cl.keyword == Keyword::Invariant) {
                    Ctx ctx = clause_ctx(c, nullptr);
                    ctx.allow_params = false;
                    parse_clause(cl, false, ctx, TypeRef::bool_());
                } else if (cl.keyword == Keyword::Def) {
                    check_def(c, cl);
                }
            }
        }
        for (auto& m : c.methods) check_method(c, m);
    }

    void check_def(ClassDecl& c, Clause& cl) {
        auto it = placeholders.find(cl.ident);
        if (it == placeholders.end()) {
            error(cl.pos, "def for undeclared placeholder '" + cl.ident + "'");
            return;
        }
        if (!defined_.insert(cl.ident).second) {
            error(cl.pos, "placeholder '" + cl.ident + "' defined twice");
            return;
        }
        const PlaceholderDecl& d = it->second;
        const ClassDecl* owner = prog_.find_class(d.cls);
        const MethodDecl* m = d.method.empty() ? nullptr : owner->find_method(d.method);
        Ctx ctx = clause_ctx(*owner, m);
        (void)c;
        switch (d.kind) {
        case PlaceholderKind::Requires:
            parse_clause(cl, false, ctx, TypeRef::bool_());
            break;
        case PlaceholderKind::Ensures:
            ctx.allow_old = true;
            ctx.allow_result = true;
            parse_clause(cl, false, ctx, TypeRef::bool_());
            break;
        case PlaceholderKind::Assignable:
            ctx.store_refs = true;
            parse_clause(cl, true, ctx, TypeRef::void_());
            break;
        case PlaceholderKind::Invariant:
            ctx.allow_params = false;
            parse_clause(cl, false, ctx, TypeRef::bool_());
            break;
        }
    }

    void check_method(ClassDecl& c, MethodDecl& m) {
        if (m.specs.size() > 1) {
            prog_.diagnostics.push_back(c.name + "." + m.name + ": only the first of " + std::to_string(m.specs.size()) +
                                        " contract cases is used");
        }
        bool explicit_assignable = false;
        for (auto& s : m.specs) {
            for (auto& cl : s.clauses) {
                Ctx ctx = clause_ctx(c, &m);
                switch (cl.keyword) {
                case Keyword::Requires:
                    parse_clause(cl, false, ctx, TypeRef::bool_());
                    break;
                case Keyword::Ensures:
                    ctx.allow_result = true;
                    ctx.allow_old = true;
                    parse_clause(cl, false, ctx, TypeRef::bool_());
                    break;
                case Keyword::Assignable:
                    ctx.store_refs = true;
                    parse_clause(cl, true, ctx, TypeRef::void_());
                    explicit_assignable = true;
                    break;
                case Keyword::RequiresAbs:
                case Keyword::EnsuresAbs:
                case Keyword::AssignableAbs:
                    break;
                default:
                    error(cl.pos, std::string(keyword_text(cl.keyword)) + " clause not allowed in a method contract");
                }
            }
        }
        (void)explicit_assignable;
        Ctx ctx = clause_ctx(c, &m);
        ctx.code = true;
        std::size_t base = ctx.scope.size();
        block(m.body, ctx, false);
        ctx.scope.resize(base);
        if (m.ret.kind != TypeRef::Kind::Void && !always_returns(m.body))
            error(m.pos, "method '" + m.name + "' may finish without returning a value");
    }

    // ---- statements ---------------------------------------------------------

    static bool always_returns(const std::vector<StmtPtr>& body) {
        for (const auto& s : body) {
            if (s->kind == StmtKind::Return) return true;
            if (s->kind == StmtKind::Block && always_returns(s->body)) return true;
            if (s->kind == StmtKind::If && s->has_else && always_returns(s->body) && always_returns(s->else_body)) return true;
        }
        return false;
    }

    void block(std::vector<StmtPtr>& body, Ctx& ctx, bool in_loop) {
        std::size_t base = ctx.scope.size();
        bool returned = false;
        for (auto& s : body) {
            if (returned) {
                error(s->pos, "unreachable statement after return");
                break;
            }
            stmt(s, ctx, in_loop);
            if (s->kind == StmtKind::Return) returned = true;
        }
        ctx.scope.resize(base);
    }

    const TypeRef* lookup_local(const Ctx& ctx, const std::string& n) const {
        for (auto it = ctx.scope.rbegin(); it != ctx.scope.rend(); ++it)
            if (it->first == n) return &it->second;
        return nullptr;
    }

    void check_rhs(ExprPtr& value, Ctx& ctx, const TypeRef& target, SourcePos p) {
        TypeRef t;
        if (value->kind == ExprKind::NewArray) {
            TypeRef n = expr(value->kids[0], ctx);
            if (n.kind != TypeRef::Kind::Int && n.kind != TypeRef::Kind::Error) error(value->pos, "array size must be int");
            value->type = value->decl_type;
            t = value->decl_type;
        } else if (value->kind == ExprKind::Call) {
            t = call(value, ctx, true);
        } else {
            t = expr(value, ctx);
        }
        if (t.kind == TypeRef::Kind::Void) {
            error(p, "void value used in assignment");
        } else if (!assignable_to(target, t)) {
            error(p, "cannot assign " + t.to_string() + " to " + target.to_string());
        }
    }

    void stmt(StmtPtr& s, Ctx& ctx, bool in_loop) {
        switch (s->kind) {
        case StmtKind::LocalDecl: {
            if (!valid_type(s->decl_type)) error(s->pos, "undeclared class type " + s->decl_type.cls);
            if (lookup_local(ctx, s->name) || param_type(ctx, s->name))
                error(s->pos, "redeclaration of '" + s->name + "'");
            if (s->value) check_rhs(s->value, ctx, s->decl_type, s->pos);
            ctx.scope.emplace_back(s->name, s->decl_type);
            break;
        }
        case StmtKind::Assign: {
            TypeRef t = lvalue(s->target, ctx);
            check_rhs(s->value, ctx, t, s->pos);
            break;
        }
        case StmtKind::ExprStmt:
            call(s->value, ctx, true);
            break;
        case StmtKind::Return: {
            if (in_loop) error(s->pos, "return inside a loop body is not supported");
            const TypeRef& r = ctx.method->ret;
            if (r.kind == TypeRef::Kind::Void) {
                if (s->value) error(s->pos, "void method returns a value");
            } else if (!s->value) {
                error(s->pos, "missing return value");
            } else {
                TypeRef t = s->value->kind == ExprKind::Call ? call(s->value, ctx, true) : expr(s->value, ctx);
                if (!assignable_to(r, t)) error(s->pos, "cannot return " + t.to_string() + " from method returning " + r.to_string());
            }
            break;
        }
        case StmtKind::Block:
            block(s->body, ctx, in_loop);
            break;
        case StmtKind::If: {
            expect_bool(s->value, ctx, "if condition");
            block(s->body, ctx, in_loop);
            if (s->has_else) block(s->else_body, ctx, in_loop);
            break;
        }
        case StmtKind::While: {
            expect_bool(s->value, ctx, "loop guard");
            if (contains_call(s->value)) error(s->value->pos, "method call in loop guard is not supported");
            if (!s->loop || s->loop->spec.clauses.empty()) {
                error(s->pos, "loop without loop_invariant annotation");
            } else {
                bool has_inv = false;
                for (auto& cl : s->loop->spec.clauses) {
                    Ctx lc = ctx;
                    lc.code = false;
                    lc.allow_old = true;
                    switch (cl.keyword) {
                    case Keyword::LoopInvariant:
                        has_inv = true;
                        parse_clause(cl, false, lc, TypeRef::bool_());
                        break;
                    case Keyword::Decreases:
                        parse_clause(cl, false, lc, TypeRef::int_());
                        break;
                    case Keyword::Assignable:
                        lc.store_refs = true;
                        parse_clause(cl, true, lc, TypeRef::void_());
                        break;
                    default:
                        error(cl.pos, std::string(keyword_text(cl.keyword)) + " clause not allowed on a loop");
                    }
                }
                if (!has_inv) error(s->pos, "loop without loop_invariant annotation");
            }
            block(s->body, ctx, true);
            break;
        }
        }
    }

    void expect_bool(ExprPtr& e, Ctx& ctx, const char* what) {
        TypeRef t = expr(e, ctx);
        if (t.kind != TypeRef::Kind::Bool && t.kind != TypeRef::Kind::Error)
            error(e->pos, std::string(what) + " must be boolean, found " + t.to_string());
    }

    static bool contains_call(const ExprPtr& e) {
        if (!e) return false;
        if (e->kind == ExprKind::Call) return true;
        if (contains_call(e->receiver)) return true;
        for (auto& k : e->kids)
            if (contains_call(k)) return true;
        return false;
    }

    const TypeRef* param_type(const Ctx& ctx, const std::string& n) const {
        if (!ctx.method || !ctx.allow_params) return nullptr;
        for (auto& p : ctx.method->params)
            if (p.name == n) return &p.type;
        return nullptr;
    }

    TypeRef lvalue(ExprPtr& e, Ctx& ctx) {
        if (e->kind == ExprKind::Name) {
            if (lookup_local(ctx, e->name) || param_type(ctx, e->name)) return expr(e, ctx);
            if (const FieldDecl* f = ctx.cls->find_field(e->name)) {
                if (f->is_final) error(e->pos, "assignment to final field '" + e->name + "'");
                return expr(e, ctx);
            }
            error(e->pos, "unknown identifier '" + e->name + "'");
            return TypeRef::error();
        }
        if (e->kind == ExprKind::FieldAccess) {
            TypeRef t = expr(e, ctx);
            if (e->is_length) error(e->pos, "array length is not assignable");
            return t;
        }
        if (e->kind == ExprKind::ArrayAccess) {
            if (e->kids.empty()) {
                error(e->pos, "a[*] is only allowed in assignable clauses");
                return TypeRef::error();
            }
            return expr(e, ctx);
        }
        error(e->pos, "not assignable");
        return TypeRef::error();
    }

    // Calls are legal only as a statement, an assignment right side, a
    // return value, or a strictly evaluated operand of those.
    TypeRef call(ExprPtr& e, Ctx& ctx, bool top) {
        (void)top;
        if (e->kind != ExprKind::Call) {
            error(e->pos, "expected a method call");
            return TypeRef::error();
        }
        return expr(e, ctx);
    }

    TypeRef store_ref(ExprPtr& e, Ctx& ctx) {
        switch (e->kind) {
        case ExprKind::Nothing:
        case ExprKind::Everything:
            e->type = TypeRef::void_();
            return e->type;
        case ExprKind::Name: {
            if (const TypeRef* t = lookup_local(ctx, e->name)) {
                e->type = *t;
                e->name_kind = NameKind::Local;
                return *t;
            }
            if (const FieldDecl* f = ctx.cls->find_field(e->name)) {
                e->type = f->type;
                e->name_kind = f->constant ? NameKind::Constant : NameKind::Field;
                e->owner = ctx.cls->name;
                if (f->constant) error(e->pos, "constant '" + e->name + "' is not a location");
                return e->type;
            }
            error(e->pos, "unknown location '" + e->name + "'");
            return TypeRef::error();
        }
        case ExprKind::FieldAccess: {
            TypeRef t = expr(e, ctx);
            if (e->is_length) error(e->pos, "array length is not a location");
            return t;
        }
        case ExprKind::ArrayAccess: {
            if (e->kids.empty()) {
                TypeRef r = expr(e->receiver, ctx);
                if (!r.is_array() && r.kind != TypeRef::Kind::Error) error(e->pos, "[*] applied to a non-array");
                e->type = r.kind == TypeRef::Kind::IntArray ? TypeRef::int_() : TypeRef::bool_();
                return e->type;
            }
            return expr(e, ctx);
        }
        default:
            error(e->pos, "not a store-ref: " + std::string("expression"));
            return TypeRef::error();
        }
    }

    // ---- expressions ---------------------------------------------------------

    TypeRef set(ExprPtr& e, TypeRef t) {
        e->type = t;
        return t;
    }

    TypeRef expr(ExprPtr& e, Ctx& ctx) {
        switch (e->kind) {
        case ExprKind::IntLit: return set(e, TypeRef::int_());
        case ExprKind::BoolLit: return set(e, TypeRef::bool_());
        case ExprKind::Null: return set(e, TypeRef::null_());
        case ExprKind::This: return set(e, TypeRef::class_(ctx.cls->name));
        case ExprKind::Result:
            if (!ctx.allow_result) {
                error(e->pos, "\\result is only allowed in postconditions");
                return set(e, TypeRef::error());
            }
            if (ctx.method->ret.kind == TypeRef::Kind::Void) {
                error(e->pos, "\\result used in a void method");
                return set(e, TypeRef::error());
            }
            return set(e, ctx.method->ret);
        case ExprKind::Name: {
            if (const TypeRef* t = lookup_local(ctx, e->name)) {
                auto b = bound_.find(e->name);
                e->name_kind = (b != bound_.end() && b->second > 0) ? NameKind::Bound : NameKind::Local;
                return set(e, *t);
            }
            if (const TypeRef* t = param_type(ctx, e->name)) {
                e->name_kind = NameKind::Param;
                return set(e, *t);
            }
            if (const FieldDecl* f = ctx.cls->find_field(e->name)) {
                e->owner = ctx.cls->name;
                if (f->constant) {
                    e->name_kind = NameKind::Constant;
                    e->ival = *f->constant;
                } else {
                    e->name_kind = NameKind::Field;
                }
                return set(e, f->type);
            }
            error(e->pos, "unknown identifier '" + e->name + "'");
            return set(e, TypeRef::error());
        }
        case ExprKind::FieldAccess: {
            TypeRef r = expr(e->receiver, ctx);
            if (r.kind == TypeRef::Kind::Error) return set(e, r);
            if (r.is_array()) {
                if (e->name != "length") {
                    error(e->pos, "arrays only have a length field");
                    return set(e, TypeRef::error());
                }
                e->is_length = true;
                return set(e, TypeRef::int_());
            }
            if (r.kind != TypeRef::Kind::Class) {
                error(e->pos, "field access on non-object of type " + r.to_string());
                return set(e, TypeRef::error());
            }
            const ClassDecl* c = prog_.find_class(r.cls);
            const FieldDecl* f = c ? c->find_field(e->name) : nullptr;
            if (!f) {
                error(e->pos, "unknown field '" + e->name + "' in class " + r.cls);
                return set(e, TypeRef::error());
            }
            e->owner = c->name;
            if (f->constant) {
                e->name_kind = NameKind::Constant;
                e->ival = *f->constant;
            } else {
                e->name_kind = NameKind::Field;
            }
            return set(e, f->type);
        }
        case ExprKind::ArrayAccess: {
            TypeRef r = expr(e->receiver, ctx);
            if (e->kids.empty()) {
                error(e->pos, "a[*] is only allowed in assignable clauses");
                return set(e, TypeRef::error());
            }
            TypeRef i = expr(e->kids[0], ctx);
            if (i.kind != TypeRef::Kind::Int && i.kind != TypeRef::Kind::Error) error(e->pos, "array index must be int");
            if (r.kind == TypeRef::Kind::Error) return set(e, r);
            if (!r.is_array()) {
                error(e->pos, "indexing a non-array of type " + r.to_string());
                return set(e, TypeRef::error());
            }
            return set(e, r.kind == TypeRef::Kind::IntArray ? TypeRef::int_() : TypeRef::bool_());
        }
        case ExprKind::Call: {
            if (!ctx.code) {
                error(e->pos, "method calls are not allowed in specifications");
                return set(e, TypeRef::error());
            }
            const ClassDecl* c = ctx.cls;
            if (e->receiver) {
                TypeRef r = expr(e->receiver, ctx);
                if (r.kind == TypeRef::Kind::Error) return set(e, r);
                if (r.kind != TypeRef::Kind::Class) {
                    error(e->pos, "method call on non-object of type " + r.to_string());
                    return set(e, TypeRef::error());
                }
                c = prog_.find_class(r.cls);
            }
            const MethodDecl* m = c ? c->find_method(e->name) : nullptr;
            if (!m) {
                error(e->pos, "call to undeclared method '" + e->name + "'");
                return set(e, TypeRef::error());
            }
            e->owner = c->name;
            if (m->params.size() != e->kids.size()) {
                error(e->pos, "method '" + e->name + "' expects " + std::to_string(m->params.size()) + " arguments");
            }
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (contains_call(e->kids[i])) error(e->kids[i]->pos, "nested method call in argument is not supported");
                TypeRef a = expr(e->kids[i], ctx);
                if (i < m->params.size() && !assignable_to(m->params[i].type, a))
                    error(e->kids[i]->pos, "argument " + std::to_string(i + 1) + " of '" + e->name + "' must be " +
                                               m->params[i].type.to_string());
            }
            return set(e, m->ret);
        }
        case ExprKind::Unary: {
            TypeRef t = expr(e->kids[0], ctx);
            if (e->uop == UnOp::Not) {
                if (t.kind != TypeRef::Kind::Bool && t.kind != TypeRef::Kind::Error) error(e->pos, "'!' needs a boolean operand");
                return set(e, TypeRef::bool_());
            }
            if (t.kind != TypeRef::Kind::Int && t.kind != TypeRef::Kind::Error) error(e->pos, "unary '-' needs an int operand");
            return set(e, TypeRef::int_());
        }
        case ExprKind::Binary: {
            bool lazy = e->bop == BinOp::And || e->bop == BinOp::Or || e->bop == BinOp::Implies;
            if (lazy && contains_call(e->kids[1])) error(e->kids[1]->pos, "method call in a short-circuit operand is not supported");
            TypeRef a = expr(e->kids[0], ctx);
            TypeRef b = expr(e->kids[1], ctx);
            auto need = [&](TypeRef::Kind k, const char* what) {
                for (const TypeRef* t : {&a, &b}) {
                    if (t->kind != k && t->kind != TypeRef::Kind::Error)
                        error(e->pos, std::string("operator '") + binop_text(e->bop) + "' needs " + what + " operands");
                }
            };
            switch (e->bop) {
            case BinOp::Add:
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div:
            case BinOp::Mod:
                need(TypeRef::Kind::Int, "int");
                return set(e, TypeRef::int_());
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge:
                need(TypeRef::Kind::Int, "int");
                return set(e, TypeRef::bool_());
            case BinOp::Eq:
            case BinOp::Ne:
                if (!comparable(a, b)) error(e->pos, "cannot compare " + a.to_string() + " with " + b.to_string());
                return set(e, TypeRef::bool_());
            default:
                need(TypeRef::Kind::Bool, "boolean");
                return set(e, TypeRef::bool_());
            }
        }
        case ExprKind::Cond: {
            if (contains_call(e->kids[1]) || contains_call(e->kids[2]))
                error(e->pos, "method call in a conditional branch is not supported");
            expect_bool(e->kids[0], ctx, "condition");
            TypeRef a = expr(e->kids[1], ctx);
            TypeRef b = expr(e->kids[2], ctx);
            if (!comparable(a, b)) error(e->pos, "conditional branches have different types");
            return set(e, a.kind == TypeRef::Kind::Null ? b : a);
        }
        case ExprKind::Old: {
            if (!ctx.allow_old) error(e->pos, "\\old is only allowed in postconditions");
            Ctx inner = ctx;
            inner.allow_old = false;
            return set(e, expr(e->receiver, inner));
        }
        case ExprKind::Quant: {
            if (e->decl_type.kind != TypeRef::Kind::Int && e->decl_type.kind != TypeRef::Kind::Bool)
                error(e->pos, "quantified variable must be int or boolean");
            ctx.scope.emplace_back(e->name, e->decl_type);
            ++bound_[e->name];
            expect_bool(e->kids[0], ctx, "quantifier range");
            expect_bool(e->kids[1], ctx, "quantifier body");
            --bound_[e->name];
            ctx.scope.pop_back();
            return set(e, TypeRef::bool_());
        }
        case ExprKind::InvariantFor: {
            TypeRef r = expr(e->receiver, ctx);
            if (r.kind != TypeRef::Kind::Class && r.kind != TypeRef::Kind::Error)
                error(e->pos, "\\invariant_for needs an object of class type");
            return set(e, TypeRef::bool_());
        }
        case ExprKind::Fresh: {
            if (!ctx.allow_old) error(e->pos, "\\fresh is only allowed in postconditions");
            TypeRef r = expr(e->receiver, ctx);
            if (!r.is_reference() && r.kind != TypeRef::Kind::Error) error(e->pos, "\\fresh needs a reference");
            return set(e, TypeRef::bool_());
        }
        case ExprKind::NewArray:
            error(e->pos, "array allocation is only allowed as an assignment right side");
            return set(e, TypeRef::error());
        case ExprKind::Everything:
        case ExprKind::Nothing:
            error(e->pos, "location set keyword outside an assignable clause");
            return set(e, TypeRef::error());
        }
        return set(e, TypeRef::error());
    }

    Program& prog_;
    std::set<std::string> defined_;
    std::map<std::string, int> bound_;
};

}  // namespace

TypecheckResult typecheck(Program program) {
    auto owned = std::make_shared<Program>(clone(program));
    Checker ck(*owned);
    ck.run();
    TypecheckResult r;
    r.errors = std::move(ck.errors);
    if (!r.errors.empty()) return r;
    TypedProgram tp;
    tp.program = owned;
    tp.placeholders = std::move(ck.placeholders);
    for (const auto& c : owned->classes)
        for (const auto& s : c.specs)
            for (const auto& cl : s.clauses)
                if (cl.keyword == Keyword::Def) tp.defs[cl.ident] = &cl;
    tp.diagnostics = owned->diagnostics;
    r.typed = std::move(tp);
    return r;
}

TypedProgram load_program(const std::string& source) {
    Program p = parse_program(source);
    TypecheckResult r = typecheck(std::move(p));
    if (!r.ok()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < r.errors.size(); ++i) os << (i ? "\n" : "") << r.errors[i].to_string();
        throw std::runtime_error(os.str());
    }
    return std::move(*r.typed);
}

}  // namespace abside::surface
