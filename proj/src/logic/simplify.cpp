#include "abside/logic/simplify.hpp"

#include "abside/logic/update.hpp"

namespace abside::logic {

std::int64_t java_div(std::int64_t a, std::int64_t b) { return b == 0 ? 0 : a / b; }
std::int64_t java_mod(std::int64_t a, std::int64_t b) { return b == 0 ? 0 : a % b; }

namespace {

bool is_value_literal(const Term& t) {
    switch (t.op()) {
    case Op::IntLit:
    case Op::True:
    case Op::False:
    case Op::Null:
    case Op::FieldConst:
        return true;
    case Op::Arr:
        return t.arg(0).op() == Op::IntLit;
    default:
        return false;
    }
}

}  // namespace

Tri syntactic_equal(const Term& a, const Term& b) {
    if (a == b) return Tri::Yes;
    if (is_value_literal(a) && is_value_literal(b)) {
        // Literals of one kind are pairwise distinct; a Field constant never equals arr(i).
        if (a.op() == b.op() || (a.sort().is_bool() && b.sort().is_bool())) return Tri::No;
        if (a.sort() == Sort::field() && b.sort() == Sort::field()) return Tri::No;
    }
    if (a.sort() == Sort::field() && b.sort() == Sort::field()) {
        if ((a.op() == Op::FieldConst && b.op() == Op::Arr) || (a.op() == Op::Arr && b.op() == Op::FieldConst)) return Tri::No;
    }
    return Tri::Unknown;
}

namespace {

// Literals go to the right so that known facts read naturally (x = 3).
bool canonical_before(const Term& a, const Term& b) {
    bool la = is_value_literal(a);
    bool lb = is_value_literal(b);
    if (la != lb) return lb;
    return a < b;
}

}  // namespace

Term eq_simp(const Term& a, const Term& b) {
    switch (syntactic_equal(a, b)) {
    case Tri::Yes: return tt();
    case Tri::No: return ff();
    case Tri::Unknown: break;
    }
    if (a.op() == Op::Arr && b.op() == Op::Arr) return eq_simp(a.arg(0), b.arg(0));
    if (a.sort().is_bool() && b.sort().is_bool()) {
        if (a.op() == Op::True) return b;
        if (b.op() == Op::True) return a;
        if (a.op() == Op::False) return not_simp(b);
        if (b.op() == Op::False) return not_simp(a);
        return canonical_before(a, b) ? iff(a, b) : iff(b, a);
    }
    if (a.sort().disjoint_references(b.sort())) {
        // Objects of unrelated types only meet in null.
        return and_simp(eq_simp(a, null_term()), eq_simp(b, null_term()));
    }
    return canonical_before(a, b) ? eq(a, b) : eq(b, a);
}

Term not_simp(const Term& a) {
    if (a.op() == Op::True) return ff();
    if (a.op() == Op::False) return tt();
    if (a.op() == Op::Not) return a.arg(0);
    return not_(a);
}

Term and_simp(const Term& a, const Term& b) {
    if (a.op() == Op::False || b.op() == Op::False) return ff();
    if (a.op() == Op::True) return b;
    if (b.op() == Op::True) return a;
    if (a == b) return a;
    return and_(a, b);
}

Term or_simp(const Term& a, const Term& b) {
    if (a.op() == Op::True || b.op() == Op::True) return tt();
    if (a.op() == Op::False) return b;
    if (b.op() == Op::False) return a;
    if (a == b) return a;
    return or_(a, b);
}

Term imp_simp(const Term& a, const Term& b) {
    if (a.op() == Op::False || b.op() == Op::True) return tt();
    if (a.op() == Op::True) return b;
    if (b.op() == Op::False) return not_simp(a);
    if (a == b) return tt();
    return imp(a, b);
}

Term membership(const Term& o, const Term& f, const Term& s) {
    switch (s.op()) {
    case Op::Empty: return ff();
    case Op::AllLocs: return tt();
    case Op::Singleton: return and_simp(eq_simp(o, s.arg(0)), eq_simp(f, s.arg(1)));
    case Op::AllFields: return eq_simp(o, s.arg(0));
    case Op::Union: return or_simp(membership(o, f, s.arg(0)), membership(o, f, s.arg(1)));
    case Op::Intersect: return and_simp(membership(o, f, s.arg(0)), membership(o, f, s.arg(1)));
    case Op::Setminus: return and_simp(membership(o, f, s.arg(0)), not_simp(membership(o, f, s.arg(1))));
    default: return elem_of(o, f, s);
    }
}

namespace {

void flatten_union(const Term& s, std::vector<Term>& out) {
    if (s.op() == Op::Union) {
        flatten_union(s.arg(0), out);
        flatten_union(s.arg(1), out);
    } else {
        out.push_back(s);
    }
}

}  // namespace

Term locset_simplify(const Term& s) {
    switch (s.op()) {
    case Op::Union: {
        std::vector<Term> parts;
        flatten_union(s, parts);
        std::vector<Term> kept;
        for (const auto& p : parts) {
            if (p.op() == Op::AllLocs) return all_locs();
            if (p.op() == Op::Empty) continue;
            bool dup = false;
            for (const auto& k : kept) {
                if (k == p) {
                    dup = true;
                    break;
                }
            }
            if (!dup) kept.push_back(p);
        }
        if (kept.empty()) return empty_set();
        Term r = kept.back();
        for (std::size_t i = kept.size() - 1; i-- > 0;) r = set_union(kept[i], r);
        return r;
    }
    case Op::Intersect: {
        const Term& a = s.arg(0);
        const Term& b = s.arg(1);
        if (a.op() == Op::Empty || b.op() == Op::Empty) return empty_set();
        if (a.op() == Op::AllLocs) return b;
        if (b.op() == Op::AllLocs) return a;
        if (a == b) return a;
        return s;
    }
    case Op::Setminus: {
        const Term& a = s.arg(0);
        const Term& b = s.arg(1);
        if (a.op() == Op::Empty || b.op() == Op::AllLocs || a == b) return empty_set();
        if (b.op() == Op::Empty) return a;
        return s;
    }
    default:
        return s;
    }
}

namespace {

Term heap_top(const Term& t);

Term select_top(const Term& h, const Term& o, const Term& f, const Sort& s) {
    switch (h.op()) {
    case Op::Store: {
        const Term& o2 = h.arg(1);
        const Term& f2 = h.arg(2);
        const Term& v = h.arg(3);
        Tri fe = syntactic_equal(f2, f);
        Tri oe = syntactic_equal(o2, o);
        if (fe == Tri::No || oe == Tri::No) return select_top(h.arg(0), o, f, s);
        if (fe == Tri::Yes && oe == Tri::Yes) return v;
        Term cond = and_simp(eq_simp(o2, o), eq_simp(f2, f));
        Term rest = select_top(h.arg(0), o, f, s);
        if (cond.op() == Op::True) return v;
        if (cond.op() == Op::False) return rest;
        return ite(cond, v, rest);
    }
    case Op::Anon: {
        Term m = membership(o, f, h.arg(1));
        if (m.op() == Op::True) return select_top(h.arg(2), o, f, s);
        if (m.op() == Op::False) return select_top(h.arg(0), o, f, s);
        return ite(m, select_top(h.arg(2), o, f, s), select_top(h.arg(0), o, f, s));
    }
    case Op::Create:
        return select_top(h.arg(0), o, f, s);
    default:
        return select(h, o, f, s);
    }
}

Term heap_top(const Term& t) {
    switch (t.op()) {
    case Op::Select:
        return select_top(t.arg(0), t.arg(1), t.arg(2), t.sort());
    case Op::Anon:
        if (t.arg(1).op() == Op::Empty) return t.arg(0);
        return t;
    case Op::ElemOf:
        return membership(t.arg(0), t.arg(1), t.arg(2));
    case Op::Union:
    case Op::Intersect:
    case Op::Setminus:
        return locset_simplify(t);
    case Op::Subset:
        if (t.arg(0).op() == Op::Empty || t.arg(1).op() == Op::AllLocs || t.arg(0) == t.arg(1)) return tt();
        return t;
    default:
        return t;
    }
}

Term heap_rec(const Term& t) {
    if (is_modality(t.op())) return t;
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(heap_rec(a));
    Term r = with_args(t, std::move(args));
    Term s = heap_top(r);
    // A rewrite may expose new redexes in freshly built subterms.
    return s == r ? r : heap_rec(s);
}

bool lit(const Term& t, std::int64_t& v) { return is_int_literal(t, &v); }

Term formula_top(const Term& t) {
    std::int64_t x = 0;
    std::int64_t y = 0;
    switch (t.op()) {
    case Op::Not: return not_simp(t.arg(0));
    case Op::And: return and_simp(t.arg(0), t.arg(1));
    case Op::Or: return or_simp(t.arg(0), t.arg(1));
    case Op::Imp: return imp_simp(t.arg(0), t.arg(1));
    case Op::Iff: return eq_simp(t.arg(0), t.arg(1));
    case Op::Eq: return eq_simp(t.arg(0), t.arg(1));
    case Op::Lt:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return x < y ? tt() : ff();
        if (t.arg(0) == t.arg(1)) return ff();
        return t;
    case Op::Le:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return x <= y ? tt() : ff();
        if (t.arg(0) == t.arg(1)) return tt();
        return t;
    case Op::Add:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return int_lit(x + y);
        if (lit(t.arg(0), x) && x == 0) return t.arg(1);
        if (lit(t.arg(1), y) && y == 0) return t.arg(0);
        return t;
    case Op::Sub:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return int_lit(x - y);
        if (lit(t.arg(1), y) && y == 0) return t.arg(0);
        if (t.arg(0) == t.arg(1)) return int_lit(0);
        return t;
    case Op::Mul:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return int_lit(x * y);
        if ((lit(t.arg(0), x) && x == 0) || (lit(t.arg(1), y) && y == 0)) return int_lit(0);
        if (lit(t.arg(0), x) && x == 1) return t.arg(1);
        if (lit(t.arg(1), y) && y == 1) return t.arg(0);
        return t;
    case Op::Div:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return int_lit(java_div(x, y));
        if (lit(t.arg(1), y) && y == 1) return t.arg(0);
        return t;
    case Op::Mod:
        if (lit(t.arg(0), x) && lit(t.arg(1), y)) return int_lit(java_mod(x, y));
        return t;
    case Op::Neg:
        if (lit(t.arg(0), x)) return int_lit(-x);
        if (t.arg(0).op() == Op::Neg) return t.arg(0).arg(0);
        return t;
    case Op::Ite: {
        const Term& c = t.arg(0);
        if (c.op() == Op::True) return t.arg(1);
        if (c.op() == Op::False) return t.arg(2);
        if (t.arg(1) == t.arg(2)) return t.arg(1);
        if (t.sort().is_bool()) {
            const Term& a = t.arg(1);
            const Term& b = t.arg(2);
            if (a.op() == Op::True && b.op() == Op::False) return c;
            if (a.op() == Op::False && b.op() == Op::True) return not_simp(c);
        }
        return t;
    }
    case Op::Forall:
    case Op::Exists: {
        const Term& body = t.arg(1);
        if (body.op() == Op::True || body.op() == Op::False) return body;
        if (!free_logical_variables(body).count(t.arg(0).name())) return body;
        return t;
    }
    default:
        return t;
    }
}

Term formula_rec(const Term& t) {
    if (is_modality(t.op())) return t;
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(formula_rec(a));
    Term r = with_args(t, std::move(args));
    Term s = formula_top(r);
    return s == r ? r : formula_rec(s);
}

}  // namespace

Term simplify_heap(const Term& t) { return heap_rec(t); }

Term simplify_formula(const Term& t) { return formula_rec(t); }

}  // namespace abside::logic
