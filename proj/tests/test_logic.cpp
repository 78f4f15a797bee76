#include <doctest.h>

#include <set>
#include <string>

#include "abside/logic/eval.hpp"
#include "abside/logic/sequent.hpp"
#include "abside/logic/simplify.hpp"
#include "abside/logic/syntax.hpp"
#include "abside/logic/update.hpp"
#include "abside/surface/parser.hpp"
#include "support/random_terms.hpp"

using namespace abside::logic;
using abside::testing::run_update;
using abside::testing::same_update;
using abside::testing::TermGen;

namespace {

Term x() { return pvar("x", Sort::integer()); }
Term y() { return pvar("y", Sort::integer()); }
Term z() { return pvar("z", Sort::integer()); }
Term h() { return pvar("heap", Sort::heap()); }
Term o() { return pvar("o", Sort::of_class("C")); }
Term fld(const char* n) { return field_const(std::string("C::") + n); }

Structure int_structure(std::int64_t xv, std::int64_t yv) {
    Structure m;
    m.pvars["x"] = Value::integer(xv);
    m.pvars["y"] = Value::integer(yv);
    return m;
}

}  // namespace

TEST_CASE("apply_update") {
    SUBCASE("substitutes into a comparison") {
        CHECK(apply_update({{x(), int_lit(2)}}, gt(x(), int_lit(0))) == gt(int_lit(2), int_lit(0)));
    }
    SUBCASE("leaves other variables alone") {
        CHECK(apply_update({{x(), pvar("t", Sort::integer())}}, y()) == y());
    }
    SUBCASE("descends through rigid functions") {
        Term f = func("f", Sort::integer(), {x(), y()});
        CHECK(apply_update({{x(), int_lit(1)}}, f) == func("f", Sort::integer(), {int_lit(1), y()}));
    }
    SUBCASE("is simultaneous") {
        Update swap{{x(), y()}, {y(), x()}};
        CHECK(apply_update(swap, sub(x(), y())) == sub(y(), x()));
    }
    SUBCASE("does not capture bound logical variables") {
        Term i = lvar("i", Sort::integer());
        Term f = forall(i, le(i, x()));
        CHECK(apply_update({{x(), int_lit(4)}}, f) == forall(i, le(i, int_lit(4))));
    }
}

TEST_CASE("simplify_parallel") {
    CHECK(same_update(simplify_parallel({{x(), int_lit(1)}, {x(), int_lit(2)}}), {{x(), int_lit(2)}}));
    Update disjoint{{x(), int_lit(1)}, {y(), int_lit(2)}};
    CHECK(same_update(simplify_parallel(disjoint), disjoint));

    Update u{{x(), int_lit(1)}, {y(), x()}, {x(), int_lit(3)}};
    Update expected{{x(), int_lit(3)}, {y(), x()}};
    CHECK(same_update(simplify_parallel(u), expected));
    // Both updates reach the same state from every pre-state.
    for (int xv = -2; xv <= 2; ++xv) {
        for (int yv = -2; yv <= 2; ++yv) {
            Structure m = int_structure(xv, yv);
            Structure a = run_update(u, m);
            Structure b = run_update(simplify_parallel(u), m);
            CHECK(a.pvars.at("x") == b.pvars.at("x"));
            CHECK(a.pvars.at("y") == b.pvars.at("y"));
            CHECK(a.pvars.at("y") == Value::integer(xv));
        }
    }
}

TEST_CASE("compose matches sequential application") {
    Update u{{x(), add(x(), int_lit(1))}};
    Update v{{y(), x()}, {x(), int_lit(0)}};
    Update uv = compose(u, v);
    for (int xv = -2; xv <= 2; ++xv) {
        Structure m = int_structure(xv, 7);
        Structure seq = run_update(v, run_update(u, m));
        Structure one = run_update(uv, m);
        CHECK(seq.pvars.at("x") == one.pvars.at("x"));
        CHECK(seq.pvars.at("y") == one.pvars.at("y"));
    }
}

TEST_CASE("simplify_heap") {
    Term h2 = pvar("h2", Sort::heap());
    SUBCASE("read over the matching write") {
        CHECK(simplify_heap(select(store(h(), o(), fld("f"), int_lit(7)), o(), fld("f"), Sort::integer())) == int_lit(7));
    }
    SUBCASE("read over a write to another field") {
        Term t = select(store(h(), o(), fld("g"), int_lit(7)), o(), fld("f"), Sort::integer());
        CHECK(simplify_heap(t) == select(h(), o(), fld("f"), Sort::integer()));
    }
    SUBCASE("anonymisation over nothing") {
        CHECK(simplify_heap(select(anon(h(), empty_set(), h2), o(), fld("f"), Sort::integer())) ==
              select(h(), o(), fld("f"), Sort::integer()));
    }
    SUBCASE("anonymisation over everything") {
        CHECK(simplify_heap(select(anon(h(), all_locs(), h2), o(), fld("f"), Sort::integer())) ==
              select(h2, o(), fld("f"), Sort::integer()));
    }
    SUBCASE("placeholder location sets stay conditional") {
        Term pre = pvar("heapAtPre", Sort::heap());
        Term self = pvar("self", Sort::of_class("C"));
        Term a = func("A", Sort::locset(), {pre, self});
        Term t = select(anon(h(), a, h2), o(), fld("f"), Sort::integer());
        Term expected = ite(elem_of(o(), fld("f"), a), select(h2, o(), fld("f"), Sort::integer()),
                            select(h(), o(), fld("f"), Sort::integer()));
        CHECK(simplify_heap(t) == expected);
        CHECK(simplify_heap(expected) == expected);
    }
}

TEST_CASE("location sets") {
    Term g_in_f = membership(o(), fld("g"), singleton(o(), fld("f")));
    CHECK(locset_simplify(set_union(empty_set(), singleton(o(), fld("f")))) == singleton(o(), fld("f")));
    CHECK(membership(o(), fld("f"), all_fields(o())) == tt());
    CHECK(g_in_f == ff());

    // Semantic check over the two-field universe.
    Structure m;
    m.objects["C"] = {1};
    m.fields = {FieldKey::named("C::f"), FieldKey::named("C::g")};
    m.pvars["o"] = Value::ref(1);
    CHECK_FALSE(evaluate(elem_of(o(), fld("g"), singleton(o(), fld("f"))), m).truth());
    CHECK(evaluate(elem_of(o(), fld("g"), all_fields(o())), m).truth());
    CHECK(evaluate(elem_of(o(), fld("f"), singleton(o(), fld("f"))), m).truth());
}

TEST_CASE("free_program_variables") {
    CHECK(free_program_variables(upd_app({{x(), int_lit(1)}}, gt(y(), x()))) == std::set<std::string>{"x", "y"});
    Term i = lvar("i", Sort::integer());
    CHECK(free_program_variables(forall(i, gt(i, int_lit(0)))).empty());
    auto stmts = abside::surface::parse_statements("x = z + 1;");
    std::vector<std::shared_ptr<const abside::surface::Stmt>> cs(stmts.begin(), stmts.end());
    CHECK(free_program_variables(cs) == std::set<std::string>{"x", "z"});
}

TEST_CASE("evaluator follows Java integer division") {
    Structure m;
    CHECK(evaluate(div_(int_lit(-7), int_lit(2)), m) == Value::integer(-3));
    CHECK(evaluate(mod_(int_lit(-7), int_lit(2)), m) == Value::integer(-1));
    CHECK(java_div(7, -2) == -3);
    CHECK(java_mod(7, -2) == 1);
}

TEST_CASE("bounded quantifiers range over the integer domain") {
    Structure m;
    m.int_lo = -2;
    m.int_hi = 2;
    Term i = lvar("i", Sort::integer());
    CHECK(evaluate(forall(i, le(i, int_lit(2))), m).truth());
    CHECK_FALSE(evaluate(forall(i, le(i, int_lit(1))), m).truth());
    CHECK(evaluate(exists(i, eq(mul(i, i), int_lit(4))), m).truth());
}

TEST_CASE("sequents keep formulas once") {
    Sequent s;
    CHECK(s.add(Side::Ante, gt(x(), int_lit(0))));
    CHECK_FALSE(s.add(Side::Ante, gt(x(), int_lit(0))));
    CHECK(s.add(Side::Succ, gt(x(), int_lit(0))));
    CHECK(s.formula_count() == 2);
    s.replace(Side::Succ, 0, gt(x(), int_lit(0)));
    CHECK(s.contains(Side::Succ, gt(x(), int_lit(0))));
}

TEST_CASE("positions print and parse") {
    for (const char* text : {"@S0", "@A3/1/0/2"}) {
        Position p = parse_position(text);
        CHECK(parse_position(to_string(p)) == p);
    }
}

TEST_CASE("random updates agree with the evaluator") {
    TermGen gen(11);
    for (int n = 0; n < 1000; ++n) {
        Update u = gen.update(2);
        Term t = gen.pick(2) ? gen.int_term(3) : gen.formula(3);
        Structure m = gen.random_structure();
        CAPTURE(to_string(u));
        CAPTURE(to_string(t));
        Value expected = evaluate(t, run_update(u, m));
        REQUIRE(evaluate(apply_update(u, t), m) == expected);
        REQUIRE(evaluate(upd_app(u, t), m) == expected);
    }
}

TEST_CASE("heap simplification preserves values") {
    TermGen gen(23);
    for (int n = 0; n < 1000; ++n) {
        Term t = gen.pick(2) ? gen.int_term(4) : gen.formula(4);
        Structure m = gen.random_structure();
        CAPTURE(to_string(t));
        REQUIRE(evaluate(simplify_heap(t), m) == evaluate(t, m));
        REQUIRE(evaluate(simplify_formula(t), m) == evaluate(t, m));
    }
}

TEST_CASE("simplify_parallel is idempotent and preserves the state change") {
    TermGen gen(37);
    for (int n = 0; n < 1000; ++n) {
        Update u = gen.update(2);
        Update once = simplify_parallel(u);
        CAPTURE(to_string(u));
        REQUIRE(same_update(simplify_parallel(once), once));
        Structure m = gen.random_structure();
        Structure a = run_update(u, m);
        Structure b = run_update(once, m);
        for (const char* v : {"x", "y", "z", "heap"}) REQUIRE(a.pvars.at(v) == b.pvars.at(v));
    }
}

TEST_CASE("terms print and parse back") {
    TermGen gen(41);
    for (int n = 0; n < 300; ++n) {
        Term t = gen.pick(2) ? gen.int_term(3) : gen.formula(3);
        Signature sig;
        sig.absorb(t);
        CAPTURE(to_string(t));
        REQUIRE(parse_term(to_string(t), sig) == t);
    }
    Signature sig;
    CHECK_THROWS_AS(parse_term("(1 +", sig), ParseError);
}
