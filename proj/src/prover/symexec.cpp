#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "abside/logic/update.hpp"
#include "internal.hpp"

namespace abside::prover::detail {

using namespace abside::logic;
using surface::Expr;
using surface::ExprKind;
using surface::ExprPtr;
using surface::NameKind;
using surface::Stmt;
using surface::StmtKind;
using surface::StmtPtr;

using Stmts = std::vector<std::shared_ptr<const Stmt>>;

std::string Names::take(const std::string& prefix) {
    std::string n;
    if (recorded_) {
        if (next_ >= recorded_->size()) throw RuleError("recorded application lacks a fresh name for " + prefix);
        n = (*recorded_)[next_++];
        if (n.rfind(prefix + "'", 0) != 0) throw RuleError("recorded fresh name " + n + " does not fit " + prefix);
        if (!proof_.reserve_name(n)) throw RuleError("recorded fresh name " + n + " is already used");
    } else {
        n = proof_.fresh_name(prefix);
    }
    used_.push_back(n);
    return n;
}

void Names::finish() const {
    if (recorded_ && next_ != recorded_->size()) throw RuleError("recorded application has unused fresh names");
}

namespace {

struct Modal {
    Update u;
    Term box;
};

std::optional<Modal> decompose(const Term& f) {
    if (f.op() == Op::Box) return Modal{{}, f};
    if (f.op() == Op::UpdApp && upd_target(f).op() == Op::Box) return Modal{update_of(f), upd_target(f)};
    return std::nullopt;
}

Term rebuild(const Update& u, Stmts stmts, const MethodFrame& frame, const Term& post) {
    return upd_app(u, box(make_block(std::move(stmts), frame), post));
}

bool has_call(const ExprPtr& e) {
    if (!e) return false;
    if (e->kind == ExprKind::Call) return true;
    if (has_call(e->receiver)) return true;
    for (const auto& k : e->kids)
        if (has_call(k)) return true;
    return false;
}

// A call whose receiver and arguments are call-free.
bool is_flat_call(const ExprPtr& e) {
    if (!e || e->kind != ExprKind::Call) return false;
    if (has_call(e->receiver)) return false;
    for (const auto& k : e->kids)
        if (has_call(k)) return false;
    return true;
}

// The slot holding the first call in evaluation order whose operands are
// call-free.
ExprPtr* first_call_slot(ExprPtr& e) {
    if (!e) return nullptr;
    if (auto* r = first_call_slot(e->receiver)) return r;
    for (auto& k : e->kids)
        if (auto* r = first_call_slot(k)) return r;
    return e->kind == ExprKind::Call ? &e : nullptr;
}

ExprPtr local_name(const std::string& name, const surface::TypeRef& type) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Name;
    e->name = name;
    e->name_kind = NameKind::Local;
    e->type = type;
    return e;
}

StmtPtr assign_stmt(ExprPtr target, ExprPtr value) {
    auto s = std::make_shared<Stmt>();
    s->kind = StmtKind::Assign;
    s->target = std::move(target);
    s->value = std::move(value);
    return s;
}

Stmts to_const(const std::vector<StmtPtr>& v) { return Stmts(v.begin(), v.end()); }

speclang::TranslationContext body_context(const speclang::ProofObligation& po, const MethodFrame& frame) {
    speclang::TranslationContext ctx;
    ctx.env = po.env.get();
    ctx.cls = frame.class_name;
    ctx.heap = pvar("heap", Sort::heap());
    ctx.heap_pre = pvar(decorated("heapAtPre", frame.class_name, frame.method_name), Sort::heap());
    ctx.self = pvar("self", Sort::of_class(frame.class_name));
    return ctx;
}

void collect_locals(const Stmt& s, std::vector<std::pair<std::string, surface::TypeRef>>& out) {
    auto note = [&](const std::string& n, const surface::TypeRef& t) {
        for (const auto& [m, ty] : out)
            if (m == n) return;
        out.emplace_back(n, t);
    };
    switch (s.kind) {
    case StmtKind::LocalDecl: note(s.name, s.decl_type); break;
    case StmtKind::Assign:
        if (s.target->kind == ExprKind::Name &&
            (s.target->name_kind == NameKind::Local || s.target->name_kind == NameKind::Param))
            note(s.target->name, s.target->type);
        break;
    default: break;
    }
    for (const auto& b : s.body) collect_locals(*b, out);
    for (const auto& b : s.else_body) collect_locals(*b, out);
}

// FNV-1a, stable across platforms and runs.
std::uint64_t stable_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace

std::optional<std::string> symexec_rule(const Term& f) {
    auto m = decompose(f);
    if (!m) return std::nullopt;
    const auto& stmts = m->box->block->stmts;
    if (stmts.empty()) return "emptyModality";
    const Stmt& s = *stmts.front();
    switch (s.kind) {
    case StmtKind::Block: return "blockFlatten";
    case StmtKind::LocalDecl: return "localDecl";
    case StmtKind::Assign:
        if (is_flat_call(s.value) && !has_call(s.target)) return "methodContract";
        if (has_call(s.value) || has_call(s.target)) return "unfoldCall";
        if (s.value->kind == ExprKind::NewArray) return std::nullopt;  // interpreter only
        if (s.target->kind == ExprKind::Name) {
            return s.target->name_kind == NameKind::Field ? "assignField" : "assignLocal";
        }
        if (s.target->kind == ExprKind::FieldAccess) return "assignField";
        if (s.target->kind == ExprKind::ArrayAccess) return "assignArray";
        return std::nullopt;
    case StmtKind::ExprStmt:
        if (is_flat_call(s.value)) return "methodContract";
        if (has_call(s.value)) return "unfoldCall";
        return std::nullopt;
    case StmtKind::If: return has_call(s.value) ? "unfoldCall" : "ifElseSplit";
    case StmtKind::While:
        if (!s.loop) return std::nullopt;
        return "loopInvariant";
    case StmtKind::Return: return has_call(s.value) ? "unfoldCall" : "returnStmt";
    }
    return std::nullopt;
}

std::vector<Sequent> apply_symexec(const Sequent& seq, const Position& pos, const std::string& rule, RuleApp& app,
                                   Names& names, const speclang::ProofObligation& po, const Settings& settings) {
    if (pos.side != Side::Succ || !pos.path.empty()) throw RuleError(rule + " applies to succedent formulas only");
    const Term& f = seq.formula(pos);
    auto expected = symexec_rule(f);
    if (!expected || *expected != rule) throw RuleError(rule + " is not applicable at " + to_string(pos));
    Modal m = *decompose(f);
    const JavaBlock& blk = *m.box->block;
    const MethodFrame& frame = blk.frame;
    const Term& post = m.box.arg(0);
    Stmts rest(blk.stmts.begin() + (blk.stmts.empty() ? 0 : 1), blk.stmts.end());
    auto ctx = body_context(po, frame);
    auto tr = [&](const ExprPtr& e) { return speclang::translate_expression(e, ctx); };
    auto one = [&](const Term& g) {
        Sequent s = seq;
        s.replace(Side::Succ, pos.index, g);
        return std::vector<Sequent>{s};
    };

    if (rule == "emptyModality") return one(upd_app(m.u, post));
    const Stmt& s = *blk.stmts.front();

    if (rule == "blockFlatten") {
        Stmts st = to_const(s.body);
        st.insert(st.end(), rest.begin(), rest.end());
        return one(rebuild(m.u, std::move(st), frame, post));
    }
    if (rule == "localDecl") {
        Stmts st;
        if (s.value) st.push_back(assign_stmt(local_name(s.name, s.decl_type), s.value));
        st.insert(st.end(), rest.begin(), rest.end());
        return one(rebuild(m.u, std::move(st), frame, post));
    }
    if (rule == "assignLocal") {
        Term x = pvar(s.target->name, speclang::sort_of(s.target->type));
        Update w{{x, tr(s.value)}};
        return one(upd_app(m.u, upd_app(w, box(make_block(std::move(rest), frame), post))));
    }
    if (rule == "assignField" || rule == "assignArray") {
        Term heap = ctx.heap;
        Term obj, fld;
        const Expr& t = *s.target;
        if (t.kind == ExprKind::Name) {
            obj = ctx.self;
            fld = field_const(t.owner + "::" + t.name);
        } else if (t.kind == ExprKind::FieldAccess) {
            obj = tr(t.receiver);
            fld = field_const(t.owner + "::" + t.name);
        } else {
            obj = tr(t.receiver);
            fld = arr(tr(t.kids.at(0)));
        }
        Update w{{heap, store(heap, obj, fld, tr(s.value))}};
        return one(upd_app(m.u, upd_app(w, box(make_block(std::move(rest), frame), post))));
    }
    if (rule == "unfoldCall") {
        StmtPtr copy = surface::clone(std::const_pointer_cast<Stmt>(blk.stmts.front()));
        ExprPtr* slot = nullptr;
        if (copy->kind == StmtKind::Assign) slot = first_call_slot(copy->target);
        if (!slot) slot = first_call_slot(copy->value);
        if (!slot) throw RuleError("no call to unfold");
        ExprPtr call = *slot;
        std::string tmp = names.take("t");
        *slot = local_name(tmp, call->type);
        Stmts st{assign_stmt(local_name(tmp, call->type), call), copy};
        st.insert(st.end(), rest.begin(), rest.end());
        return one(rebuild(m.u, std::move(st), frame, post));
    }
    if (rule == "ifElseSplit") {
        Term g = tr(s.value);
        Stmts then_st = to_const(s.body);
        then_st.insert(then_st.end(), rest.begin(), rest.end());
        Stmts else_st = to_const(s.else_body);
        else_st.insert(else_st.end(), rest.begin(), rest.end());
        Sequent a = seq;
        a.replace(Side::Succ, pos.index, rebuild(m.u, std::move(then_st), frame, post));
        a.add(Side::Ante, upd_app(m.u, g));
        Sequent b = seq;
        b.replace(Side::Succ, pos.index, rebuild(m.u, std::move(else_st), frame, post));
        b.add(Side::Succ, upd_app(m.u, g));
        return {a, b};
    }
    if (rule == "returnStmt") {
        Update w;
        if (s.value && frame.result.valid()) w.push_back({frame.result, tr(s.value)});
        return one(upd_app(m.u, upd_app(w, box(make_block({}, frame), post))));
    }
    if (rule == "methodContract") {
        const Expr& call = *s.value;
        const auto& contract = po.env->contract(call.owner, call.name);
        const auto& cv = contract.vars;
        std::string inst = contract.id() + "@" + hex(stable_hash(contract.fingerprint));
        if (!app.inst.empty() && app.inst != inst) throw RuleError("callee contract changed: " + app.inst + " vs " + inst);
        app.inst = inst;
        Update w{{cv.self, call.receiver ? tr(call.receiver) : ctx.self}};
        for (std::size_t i = 0; i < cv.params.size(); ++i) w.push_back({cv.params[i], tr(call.kids.at(i))});

        Sequent p1 = seq;
        p1.replace(Side::Succ, pos.index, upd_app(m.u, upd_app(w, and_(contract.pre, contract.side))));

        Term h = func(names.take("h"), Sort::heap());
        Update anon_u{{cv.heap, anon(cv.heap, contract.mod, h)}};
        Stmts cont;
        if (cv.result.valid()) {
            anon_u.push_back({cv.result, func(names.take("r"), cv.result.sort())});
            if (s.kind == StmtKind::Assign) {
                cont.push_back(assign_stmt(s.target, local_name(cv.result.name(), call.type)));
            }
        }
        cont.insert(cont.end(), rest.begin(), rest.end());
        Term use = imp(contract.post, box(make_block(std::move(cont), frame), post));
        Term g = upd_app(m.u, upd_app(w, upd_app({{cv.heap_pre, cv.heap}}, upd_app(anon_u, use))));
        Sequent p2 = seq;
        p2.replace(Side::Succ, pos.index, g);
        return {p1, p2};
    }
    if (rule == "loopInvariant") {
        std::vector<Term> invs;
        std::vector<ExprPtr> mods;
        bool has_mod = false;
        ExprPtr variant;
        for (const auto& c : s.loop->spec.clauses) {
            switch (c.keyword) {
            case surface::Keyword::LoopInvariant: invs.push_back(tr(c.exprs.at(0))); break;
            case surface::Keyword::Assignable:
                has_mod = true;
                mods.insert(mods.end(), c.exprs.begin(), c.exprs.end());
                break;
            case surface::Keyword::Decreases: variant = c.exprs.at(0); break;
            default: break;
            }
        }
        Term inv = conj(invs);
        Term mod = has_mod ? speclang::translate_store_refs(mods, ctx) : all_locs();
        std::vector<std::pair<std::string, surface::TypeRef>> locals;
        for (const auto& b : s.body) collect_locals(*b, locals);

        Term heap = ctx.heap;
        Term before = pvar(names.take("heapBefore"), Sort::heap());
        Term h = func(names.take("h"), Sort::heap());
        Update pre_u{{before, heap}};
        Update anon_u{{heap, anon(heap, mod, h)}};
        Update back_u{{heap, before}};
        for (const auto& [n, ty] : locals) {
            Sort so = speclang::sort_of(ty);
            Term b = pvar(n, so);
            Term bp = pvar(names.take(n + "'pre"), so);
            pre_u.push_back({bp, b});
            anon_u.push_back({b, func(names.take(n), so)});
            back_u.push_back({b, bp});
        }
        Term o = lvar("o", Sort::object());
        Term fv = lvar("f", Sort::field());
        Term frame_f = forall(o, forall(fv, or_(elem_of(o, fv, upd_app(back_u, mod)),
                                                eq(select(heap, o, fv, Sort::any()), select(before, o, fv, Sort::any())))));
        Term g = tr(s.value);
        auto under = [&](const Term& t) { return upd_app(m.u, upd_app(pre_u, upd_app(anon_u, t))); };
        Stmts body = to_const(s.body);

        std::vector<Sequent> out;
        Sequent init = seq;
        init.replace(Side::Succ, pos.index, upd_app(m.u, inv));
        out.push_back(init);
        Sequent step = seq;
        step.replace(Side::Succ, pos.index, under(imp(and_(inv, g), box(make_block(body, frame), and_(inv, frame_f)))));
        out.push_back(step);
        Sequent use = seq;
        use.replace(Side::Succ, pos.index, under(imp(and_(inv, not_(g)), box(make_block(std::move(rest), frame), post))));
        out.push_back(use);
        if (settings.check_decreases && variant) {
            Term d = tr(variant);
            Term old_d = pvar(names.take("variant"), Sort::integer());
            Sequent nonneg = seq;
            nonneg.replace(Side::Succ, pos.index, under(imp(and_(inv, g), le(int_lit(0), d))));
            out.push_back(nonneg);
            Sequent dec = seq;
            dec.replace(Side::Succ, pos.index,
                        under(imp(and_(inv, g), upd_app({{old_d, d}}, box(make_block(body, frame), lt(d, old_d))))));
            out.push_back(dec);
        }
        return out;
    }
    throw RuleError("unknown symbolic execution rule " + rule);
}

}  // namespace abside::prover::detail
