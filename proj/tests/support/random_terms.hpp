#pragma once

// Random ground terms over a tiny signature, shared by the logic property
// tests and the acceptance binary. Program variables x, y, z: int; p, q: C;
// heap, h2: Heap. Fields C::f, C::g, C::k. Objects p = 1, q = 2.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "abside/logic/eval.hpp"
#include "abside/logic/term.hpp"
#include "abside/logic/update.hpp"

namespace abside::testing {

using namespace abside::logic;

class TermGen {
public:
    explicit TermGen(std::uint32_t seed) : rng_(seed) {}

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    Term int_var() { return pvar(std::string(1, "xyz"[pick(3)]), Sort::integer()); }
    Term obj() { return pvar(pick(2) ? "p" : "q", Sort::of_class("C")); }
    Term fld() { return field_const(std::string("C::") + "fgk"[pick(3)]); }
    Term heap_var() { return pvar(pick(4) ? "heap" : "h2", Sort::heap()); }

    Term int_term(int depth) {
        if (depth <= 0) return pick(2) ? int_lit(pick(7) - 3) : int_var();
        switch (pick(6)) {
        case 0: return int_lit(pick(7) - 3);
        case 1: return int_var();
        case 2: return add(int_term(depth - 1), int_term(depth - 1));
        case 3: return sub(int_term(depth - 1), int_term(depth - 1));
        case 4: return ite(formula(depth - 1), int_term(depth - 1), int_term(depth - 1));
        default: return select(heap_term(depth - 1), obj(), fld(), Sort::integer());
        }
    }

    Term locset(int depth) {
        switch (depth <= 0 ? pick(3) : pick(5)) {
        case 0: return empty_set();
        case 1: return singleton(obj(), fld());
        case 2: return all_fields(obj());
        case 3: return set_union(locset(depth - 1), locset(depth - 1));
        default: return pick(3) ? singleton(obj(), fld()) : all_locs();
        }
    }

    Term heap_term(int depth) {
        if (depth <= 0) return heap_var();
        switch (pick(5)) {
        case 0: return heap_var();
        case 1:
        case 2: return store(heap_term(depth - 1), obj(), fld(), int_term(depth - 1));
        case 3: return anon(heap_term(depth - 1), locset(depth - 1), heap_var());
        default: return create(heap_term(depth - 1), obj());
        }
    }

    Term formula(int depth) {
        if (depth <= 0) return pick(2) ? eq(int_var(), int_lit(pick(7) - 3)) : lt(int_var(), int_var());
        switch (pick(6)) {
        case 0: return eq(int_term(depth - 1), int_term(depth - 1));
        case 1: return le(int_term(depth - 1), int_term(depth - 1));
        case 2: return not_(formula(depth - 1));
        case 3: return and_(formula(depth - 1), formula(depth - 1));
        case 4: return elem_of(obj(), fld(), locset(depth - 1));
        default: return eq(obj(), obj());
        }
    }

    Update update(int depth) {
        Update u;
        int n = 1 + pick(3);
        for (int i = 0; i < n; ++i) {
            if (pick(4) == 0) {
                u.push_back({pvar("heap", Sort::heap()), heap_term(depth)});
            } else {
                u.push_back({int_var(), int_term(depth)});
            }
        }
        return u;
    }

    HeapCells random_heap() {
        HeapCells c;
        for (ObjId o : {1, 2}) {
            for (const char* f : {"C::f", "C::g", "C::k"}) {
                if (pick(3)) c[Loc{o, FieldKey::named(f)}] = Value::integer(pick(7) - 3);
            }
        }
        return c;
    }

    Structure random_structure() {
        Structure m;
        m.int_lo = -3;
        m.int_hi = 3;
        m.objects["C"] = {1, 2};
        m.fields = {FieldKey::named("C::f"), FieldKey::named("C::g"), FieldKey::named("C::k")};
        for (const char* v : {"x", "y", "z"}) m.pvars[v] = Value::integer(pick(7) - 3);
        m.pvars["p"] = Value::ref(1);
        m.pvars["q"] = Value::ref(2);
        m.pvars["heap"] = Value::of_heap(random_heap());
        m.pvars["h2"] = Value::of_heap(random_heap());
        return m;
    }

private:
    std::mt19937 rng_;
};

inline bool same_update(const Update& a, const Update& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].lhs != b[i].lhs || a[i].rhs != b[i].rhs) return false;
    }
    return true;
}

// The state reached by running u in m: every right side is evaluated in m
// first, then the assignments take effect, the right-most one winning.
inline Structure run_update(const Update& u, const Structure& m) {
    std::vector<Value> values;
    for (const auto& a : u) values.push_back(evaluate(a.rhs, m));
    Structure out = m;
    for (std::size_t i = 0; i < u.size(); ++i) out.pvars[u[i].lhs.name()] = values[i];
    return out;
}

}  // namespace abside::testing
