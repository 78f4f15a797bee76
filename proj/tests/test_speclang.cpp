#include <doctest.h>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "abside/logic/syntax.hpp"
#include "abside/speclang/contract.hpp"
#include "abside/surface/parser.hpp"
#include "abside/surface/typecheck.hpp"
#include "support/corpus.hpp"

using namespace abside;
using namespace abside::logic;
using abside::testing::corpus_env;
using abside::testing::env_of_source;

namespace {

std::vector<Term> conjuncts(const Term& t) {
    if (t.op() != Op::And) return {t};
    auto l = conjuncts(t.arg(0));
    auto r = conjuncts(t.arg(1));
    l.insert(l.end(), r.begin(), r.end());
    return l;
}

bool contains(const Term& t, const Term& s) {
    bool found = false;
    visit(t, [&](const Term& u) {
        if (u == s) found = true;
        return !found;
    });
    return found;
}

std::vector<const surface::Clause*> clauses_of(const surface::TextualSpec& s, surface::Keyword k) {
    std::vector<const surface::Clause*> out;
    for (const auto& c : s.clauses)
        if (c.keyword == k) out.push_back(&c);
    return out;
}

surface::TextualSpec desugared(const std::string& src) {
    surface::Program p = surface::parse_program(src);
    const auto& m = p.classes.at(0).methods.at(0);
    return speclang::desugar(m.specs.empty() ? surface::TextualSpec{} : m.specs[0], m);
}

Term sel(const Term& heap, const Term& obj, const std::string& f) {
    return select(heap, obj, field_const(f), Sort::integer());
}

}  // namespace

TEST_CASE("desugar fills in defaults") {
    using surface::Keyword;
    SUBCASE("pure method with only a postcondition") {
        auto s = desugared("class A { int exam; /*@ normal_behavior ensures \\result == exam; @*/ int /*@ pure @*/ get() { return exam; } }");
        REQUIRE(clauses_of(s, Keyword::Requires).size() == 1);
        CHECK(clauses_of(s, Keyword::Requires)[0]->text == "true");
        REQUIRE(clauses_of(s, Keyword::Ensures).size() == 1);
        CHECK(clauses_of(s, Keyword::Ensures)[0]->text == "\\result == exam");
        REQUIRE(clauses_of(s, Keyword::Assignable).size() == 1);
        CHECK(clauses_of(s, Keyword::Assignable)[0]->text == "\\nothing");
    }
    SUBCASE("no clauses at all") {
        auto s = desugared("class A { void m() { } }");
        CHECK(clauses_of(s, Keyword::Requires)[0]->text == "true");
        CHECK(clauses_of(s, Keyword::Ensures)[0]->text == "true");
        CHECK(clauses_of(s, Keyword::Assignable)[0]->text == "\\everything");
    }
    SUBCASE("requires clauses are conjoined") {
        auto s = desugared("class A { int f; /*@ requires f > 0; requires f < 9; @*/ void m() { } }");
        auto req = clauses_of(s, Keyword::Requires);
        REQUIRE(req.size() == 1);
        CHECK(req[0]->text.find("f > 0") != std::string::npos);
        CHECK(req[0]->text.find("f < 9") != std::string::npos);
        CHECK(req[0]->text.find("&&") != std::string::npos);
    }
}

TEST_CASE("translation of concrete clauses") {
    SUBCASE("result and field reads") {
        auto env = corpus_env("student", "v1_concrete");
        const auto& c = env->contract("StudentRecord", "computeGrade");
        Term self = c.vars.self, heap = c.vars.heap;
        Term expected = eq(c.vars.result, add(sel(heap, self, "StudentRecord::exam"), sel(heap, self, "StudentRecord::bonus")));
        CHECK(conjuncts(c.post).at(0) == expected);
        CHECK(contains(c.pre, le(int_lit(0), sel(heap, self, "StudentRecord::bonus"))));
        CHECK(c.mod == empty_set());
        CHECK_FALSE(c.pre_abstract);
        CHECK_FALSE(c.fully_abstract);
    }
    SUBCASE("old values read the pre-state heap") {
        auto env = env_of_source(
            "class Account { int balance; /*@ ensures \\old(balance) + x == balance; assignable balance; @*/"
            " void update(int x) { balance = balance + x; } }");
        const auto& c = env->contract("Account", "update");
        Term expected = eq(add(sel(c.vars.heap_pre, c.vars.self, "Account::balance"), c.vars.params.at(0)),
                           sel(c.vars.heap, c.vars.self, "Account::balance"));
        CHECK(contains(c.post, expected));
        CHECK(c.mod == singleton(c.vars.self, field_const("Account::balance")));
    }
    SUBCASE("store-refs") {
        auto env = env_of_source(
            "class A { int[] a; /*@ assignable a[*]; @*/ void m() { } /*@ assignable \\everything; @*/ void n() { } }");
        const auto& c = env->contract("A", "m");
        CHECK(c.mod == all_fields(select(c.vars.heap_pre, c.vars.self, field_const("A::a"), Sort::int_array())));
        CHECK(env->contract("A", "n").mod == all_locs());
    }
}

TEST_CASE("abstract computeGrade contract") {
    auto env = corpus_env("student", "v1_abstract");
    const auto& c = env->contract("StudentRecord", "computeGrade");
    const auto& v = c.vars;
    auto atom = [&](const char* name, std::vector<Term> args) {
        return func(name, Sort::boolean(), std::move(args));
    };
    std::vector<Term> pre{atom("computeGradeR", {v.heap, v.self}), atom("env1", {v.heap, v.self}), atom("env2", {v.heap, v.self})};
    std::vector<Term> post{atom("computeGradeE", {v.heap, v.heap_pre, v.self, v.result}), atom("env1", {v.heap, v.self}),
                           atom("env2", {v.heap, v.self})};
    CHECK(conjuncts(c.pre) == pre);
    CHECK(conjuncts(c.post) == post);
    CHECK(c.mod == func("computeGradeA", Sort::locset(), {v.heap_pre, v.self}));
    CHECK(c.fully_abstract);
    CHECK(speclang::conforms_to_abstract_grammar(*env, c.pre, c.post, c.mod));
}

TEST_CASE("mixed contract") {
    auto env = env_of_source(
        "class A { int f; /*@ requires_abs R; def R = f > 0; assignable \\nothing; @*/ void m() { } }");
    const auto& c = env->contract("A", "m");
    CHECK(c.pre_abstract);
    CHECK_FALSE(c.mod_abstract);
    CHECK_FALSE(c.fully_abstract);
    CHECK(c.mod == empty_set());
}

TEST_CASE("definitions become rewrite rules") {
    auto env = corpus_env("student", "v1_abstract");
    auto rule = [&](const std::string& p) {
        const auto* r = env->rule_for(p);
        REQUIRE(r != nullptr);
        return *r;
    };
    Term sh = pvar("sv_heap", Sort::heap());
    Term sself = pvar("sv_self", Sort::of_class("StudentRecord"));

    auto e = rule("computeGradeE");
    CHECK(e.name == "expand_def_computeGradeE");
    CHECK(e.rule_set == "expand_def");
    REQUIRE(e.schematics.size() == 4);
    Term sres = e.schematics[3];
    CHECK(e.rhs == eq(sres, add(sel(e.schematics[0], e.schematics[2], "StudentRecord::exam"),
                                sel(e.schematics[0], e.schematics[2], "StudentRecord::bonus"))));

    CHECK(rule("computeGradeA").rhs == empty_set());

    auto env2 = rule("env2");
    CHECK(env2.rule_set == "class_invariant");
    Term labs = select(env2.schematics[0], env2.schematics[1], field_const("StudentRecord::labs"), Sort::bool_array());
    CHECK(env2.rhs == eq(select(env2.schematics[0], labs, field_const("length"), Sort::integer()), int_lit(10)));

    // Instantiation substitutes the actual arguments.
    Term h = pvar("heap", Sort::heap());
    Term s = pvar("s", Sort::of_class("StudentRecord"));
    Term occ = func("env2", Sort::boolean(), {h, s});
    REQUIRE(env2.matches(occ));
    CHECK(env2.apply(occ) == eq(select(h, select(h, s, field_const("StudentRecord::labs"), Sort::bool_array()),
                                       field_const("length"), Sort::integer()),
                                int_lit(10)));
    CHECK_FALSE(env2.matches(func("env1", Sort::boolean(), {h, s})));
    CHECK_THROWS_AS(env2.apply(func("env1", Sort::boolean(), {h, s})), speclang::SpecError);
    (void)sh;
    (void)sself;
}

TEST_CASE("proof obligations register one rule per placeholder") {
    auto abstract_po = speclang::build_proof_obligation(corpus_env("student", "v1_abstract"), "StudentRecord", "passed");
    CHECK(abstract_po.rules.size() == 9);
    CHECK(abstract_po.initial.ante().empty());
    REQUIRE(abstract_po.initial.succ().size() == 1);
    CHECK(abstract_po.initial.has_modality());

    auto concrete_po = speclang::build_proof_obligation(corpus_env("student", "v1_concrete"), "StudentRecord", "passed");
    CHECK(concrete_po.rules.empty());

    CHECK_THROWS(speclang::build_proof_obligation(
        env_of_source("class A { /*@ requires_abs R; @*/ void m() { } }"), "A", "m"));
    CHECK_THROWS(speclang::build_proof_obligation(corpus_env("student", "v1_concrete"), "StudentRecord", "nope"));
}

TEST_CASE("postconditions without an invariant atom leave the abstract grammar") {
    for (const char* fam : {"student", "account", "log_begin", "log_end"}) {
        for (const char* ver : {"v1_abstract", "v1_ring_abstract"}) {
            std::string path = testing::corpus_file(fam, ver);
            if (testing::read_text(path).empty()) continue;
            auto env = harness::load_env(path);
            for (const auto& cls : env->program().classes) {
                for (const auto& m : cls.methods) {
                    const auto& c = env->contract(cls.name, m.name);
                    if (!c.fully_abstract) continue;
                    CAPTURE(c.id());
                    REQUIRE(speclang::conforms_to_abstract_grammar(*env, c.pre, c.post, c.mod));
                    std::vector<Term> kept, invariants;
                    for (const Term& p : conjuncts(c.post)) {
                        const auto* ph = p.op() == Op::Func ? env->find_placeholder(p.name()) : nullptr;
                        (ph && ph->kind == surface::PlaceholderKind::Invariant ? invariants : kept).push_back(p);
                    }
                    REQUIRE_FALSE(invariants.empty());
                    std::string why;
                    CHECK_FALSE(speclang::conforms_to_abstract_grammar(*env, c.pre, conj(kept), c.mod, &why));
                    CHECK(why.find("invariant") != std::string::npos);
                    // One invariant atom is enough.
                    kept.push_back(invariants.back());
                    CHECK(speclang::conforms_to_abstract_grammar(*env, c.pre, conj(kept), c.mod));
                    // Neither are concrete conjuncts nor a missing ensures atom.
                    CHECK_FALSE(speclang::conforms_to_abstract_grammar(*env, c.pre, and_(c.post, tt()), c.mod));
                    CHECK_FALSE(speclang::conforms_to_abstract_grammar(*env, c.pre, conj(invariants), c.mod));
                }
            }
        }
    }
}

TEST_CASE("expand_all removes every placeholder") {
    auto env = corpus_env("account", "v1_abstract");
    for (const auto& cls : env->program().classes) {
        for (const auto& m : cls.methods) {
            const auto& c = env->contract(cls.name, m.name);
            for (const Term& t : {c.pre, c.post, c.mod}) {
                Term x = speclang::expand_all(t, env->rules());
                visit(x, [&](const Term& u) {
                    if (u.op() == Op::Func) CHECK(env->find_placeholder(u.name()) == nullptr);
                    return true;
                });
            }
        }
    }
}

TEST_CASE("contract selectors") {
    auto env = corpus_env("account", "v1_concrete");
    CHECK(speclang::parse_selector(env->program(), "Transaction.transfer") ==
          std::pair<std::string, std::string>{"Transaction", "transfer"});
    CHECK(speclang::parse_selector(env->program(), "Transaction.transfer#0").second == "transfer");
    CHECK_THROWS(speclang::parse_selector(env->program(), "Transaction"));
    CHECK_THROWS(speclang::parse_selector(env->program(), "Nope.transfer"));
}
