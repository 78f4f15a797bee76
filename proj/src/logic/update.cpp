#include "abside/logic/update.hpp"

#include <map>

#include "abside/surface/ast.hpp"

namespace abside::logic {

std::string decorated(const std::string& base, const std::string& cls, const std::string& method) {
    return base + "@" + cls + "." + method;
}

Update simplify_parallel(const Update& u) {
    std::map<std::string, std::size_t> slot;
    Update out;
    for (const auto& a : u) {
        auto it = slot.find(a.lhs.name());
        if (it == slot.end()) {
            slot.emplace(a.lhs.name(), out.size());
            out.push_back(a);
        } else {
            out[it->second].rhs = a.rhs;
        }
    }
    return out;
}

std::set<std::string> free_logical_variables(const Term& t) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    std::function<void(const Term&)> go = [&](const Term& s) {
        if (s.op() == Op::LVar) {
            for (const auto& b : bound) {
                if (b == s.name()) return;
            }
            out.insert(s.name());
            return;
        }
        if (s.op() == Op::Forall || s.op() == Op::Exists) {
            bound.push_back(s.arg(0).name());
            go(s.arg(1));
            bound.pop_back();
            return;
        }
        for (const auto& a : s.args()) go(a);
    };
    go(t);
    return out;
}

namespace {

// Deterministic: the first primed variant not in avoid.
Term fresh_lvar_like(const Term& v, const std::set<std::string>& avoid) {
    for (int k = 1;; ++k) {
        std::string n = v.name() + "'" + std::to_string(k);
        if (!avoid.count(n)) return lvar(n, v.sort());
    }
}

std::set<std::string> rhs_lvars(const Update& u) {
    std::set<std::string> out;
    for (const auto& a : u) {
        auto s = free_logical_variables(a.rhs);
        out.insert(s.begin(), s.end());
    }
    return out;
}

Term apply_rec(const Update& u, const Term& t, const std::set<std::string>& captured);

Term apply_rec(const Update& u, const Term& t, const std::set<std::string>& captured) {
    switch (t.op()) {
    case Op::PVar: {
        for (auto it = u.rbegin(); it != u.rend(); ++it) {
            if (it->lhs.name() == t.name()) return it->rhs;
        }
        return t;
    }
    case Op::LVar:
    case Op::IntLit:
    case Op::True:
    case Op::False:
    case Op::Null:
    case Op::FieldConst:
    case Op::Empty:
    case Op::AllLocs:
        return t;
    case Op::UpdApp: {
        Update w = compose(u, update_of(t));
        const Term& target = upd_target(t);
        if (is_modality(target.op())) return upd_app(w, target);
        return apply_rec(w, target, rhs_lvars(w));
    }
    case Op::Box:
    case Op::Diamond:
        return upd_app(u, t);
    case Op::Forall:
    case Op::Exists: {
        Term v = t.arg(0);
        Term body = t.arg(1);
        if (captured.count(v.name())) {
            auto avoid = captured;
            auto inner = free_logical_variables(body);
            avoid.insert(inner.begin(), inner.end());
            Term nv = fresh_lvar_like(v, avoid);
            body = substitute(body, v, nv);
            v = nv;
        }
        Term nb = apply_rec(u, body, captured);
        return t.op() == Op::Forall ? forall(v, nb) : exists(v, nb);
    }
    default: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) args.push_back(apply_rec(u, a, captured));
        return with_args(t, std::move(args));
    }
    }
}

}  // namespace

Term apply_update(const Update& u, const Term& target) {
    if (u.empty()) return target;
    Update s = simplify_parallel(u);
    return apply_rec(s, target, rhs_lvars(s));
}

Update compose(const Update& u, const Update& v) {
    Update out = u;
    for (const auto& a : v) out.push_back({a.lhs, apply_update(u, a.rhs)});
    return simplify_parallel(out);
}

Update prune(const Update& u, const Term& target) {
    auto used = free_program_variables(target);
    Update out;
    for (const auto& a : u) {
        if (used.count(a.lhs.name())) out.push_back(a);
    }
    return out;
}

namespace {

void stmt_vars(const surface::Stmt& s, std::set<std::string>& out);

void expr_vars(const surface::ExprPtr& e, std::set<std::string>& out) {
    using surface::ExprKind;
    if (!e) return;
    switch (e->kind) {
    case ExprKind::Name:
        if (e->name_kind == surface::NameKind::Field) {
            out.insert("heap");
            out.insert("self");
        } else if (e->name_kind == surface::NameKind::Local || e->name_kind == surface::NameKind::Param ||
                   e->name_kind == surface::NameKind::Unresolved) {
            // Unresolved names come from statements that were never type-checked.
            out.insert(e->name);
        }
        break;
    case ExprKind::This:
        out.insert("self");
        break;
    case ExprKind::FieldAccess:
    case ExprKind::ArrayAccess:
    case ExprKind::NewArray:
        out.insert("heap");
        break;
    case ExprKind::Call:
        out.insert("heap");
        if (!e->receiver) out.insert("self");
        break;
    default:
        break;
    }
    expr_vars(e->receiver, out);
    for (const auto& k : e->kids) expr_vars(k, out);
}

void stmt_vars(const surface::Stmt& s, std::set<std::string>& out) {
    if (s.kind == surface::StmtKind::LocalDecl) out.insert(s.name);
    expr_vars(s.target, out);
    expr_vars(s.value, out);
    for (const auto& b : s.body) stmt_vars(*b, out);
    for (const auto& b : s.else_body) stmt_vars(*b, out);
    if (s.loop) {
        // Loop annotations read heap and locals through their own clauses.
        for (const auto& c : s.loop->spec.clauses) {
            for (const auto& e : c.exprs) expr_vars(e, out);
        }
    }
}

void collect_assigned(const surface::Stmt& s, std::vector<std::string>& out) {
    auto add = [&](const std::string& n) {
        for (const auto& o : out) {
            if (o == n) return;
        }
        out.push_back(n);
    };
    if (s.kind == surface::StmtKind::Assign && s.target && s.target->kind == surface::ExprKind::Name &&
        (s.target->name_kind == surface::NameKind::Local || s.target->name_kind == surface::NameKind::Param)) {
        add(s.target->name);
    }
    if (s.kind == surface::StmtKind::LocalDecl) add(s.name);
    for (const auto& b : s.body) collect_assigned(*b, out);
    for (const auto& b : s.else_body) collect_assigned(*b, out);
}

}  // namespace

std::set<std::string> free_program_variables(const Term& t) {
    std::set<std::string> out;
    visit(t, [&](const Term& s) {
        if (s.op() == Op::PVar) out.insert(s.name());
        if (s.op() == Op::UpdApp) {
            for (const auto& l : s->lhs) out.insert(l.name());
        }
        if (is_modality(s.op())) {
            const JavaBlock& b = *s->block;
            for (const auto& st : b.stmts) stmt_vars(*st, out);
            if (b.frame.result.valid()) out.insert(b.frame.result.name());
            // \old inside loop annotations reads the method's pre-state heap.
            out.insert(decorated("heapAtPre", b.frame.class_name, b.frame.method_name));
        }
        return true;
    });
    return out;
}

std::set<std::string> free_program_variables(const Update& u) {
    std::set<std::string> out;
    for (const auto& a : u) {
        out.insert(a.lhs.name());
        auto r = free_program_variables(a.rhs);
        out.insert(r.begin(), r.end());
    }
    return out;
}

std::set<std::string> free_program_variables(const std::vector<std::shared_ptr<const surface::Stmt>>& stmts) {
    std::set<std::string> out;
    for (const auto& s : stmts) stmt_vars(*s, out);
    return out;
}

std::vector<std::string> assigned_locals(const std::vector<std::shared_ptr<const surface::Stmt>>& stmts) {
    std::vector<std::string> out;
    for (const auto& s : stmts) collect_assigned(*s, out);
    return out;
}

Term substitute(const Term& t, const Term& v, const Term& s) {
    if (t.op() == Op::LVar) return t.name() == v.name() ? s : t;
    if (t.op() == Op::Forall || t.op() == Op::Exists) {
        if (t.arg(0).name() == v.name()) return t;
        Term bv = t.arg(0);
        Term body = t.arg(1);
        auto fs = free_logical_variables(s);
        if (fs.count(bv.name())) {
            auto avoid = fs;
            auto inner = free_logical_variables(body);
            avoid.insert(inner.begin(), inner.end());
            avoid.insert(v.name());
            Term nv = fresh_lvar_like(bv, avoid);
            body = substitute(body, bv, nv);
            bv = nv;
        }
        Term nb = substitute(body, v, s);
        return t.op() == Op::Forall ? forall(bv, nb) : exists(bv, nb);
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(substitute(a, v, s));
    return with_args(t, std::move(args));
}

}  // namespace abside::logic
