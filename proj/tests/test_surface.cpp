#include <doctest.h>

#include <algorithm>
#include <string>

#include "abside/surface/parser.hpp"
#include "abside/surface/printer.hpp"
#include "abside/surface/typecheck.hpp"
#include "support/corpus.hpp"

using namespace abside::surface;
using abside::testing::corpus_file;
using abside::testing::read_text;

namespace {

std::size_t count_kind(const std::vector<TextualSpec>& specs, TextualSpec::Kind k) {
    return static_cast<std::size_t>(std::count_if(specs.begin(), specs.end(), [&](const auto& s) { return s.kind == k; }));
}

bool typechecks(const std::string& src) { return typecheck(parse_program(src)).ok(); }

const char* kAllCorpus[] = {
    "account/v1_concrete", "account/v1_partial", "account/v1_abstract", "account/v3_concrete",
    "account/v5_abstract", "student/v1_concrete", "student/v2_partial", "student/v3_abstract",
    "student/bug_concrete", "log_begin/v1_ring_abstract", "log_begin/v2_empty_concrete",
    "log_end/v3_replace_abstract", "log_end/v3_replace_concrete",
};

std::string path_of(const std::string& rel) {
    auto slash = rel.find('/');
    return corpus_file(rel.substr(0, slash), rel.substr(slash + 1));
}

}  // namespace

TEST_CASE("StudentRecord parses to one class with four fields, two methods and two invariants") {
    Program p = parse_program(read_text(corpus_file("student", "v1_concrete")));
    REQUIRE(p.classes.size() == 1);
    const ClassDecl& c = p.classes[0];
    CHECK(c.name == "StudentRecord");
    CHECK(c.fields.size() == 4);
    CHECK(c.methods.size() == 2);
    CHECK(count_kind(c.specs, TextualSpec::Kind::Invariant) == 2);
    CHECK(c.find_method("computeGrade") != nullptr);
    CHECK(c.find_field("labs")->type.kind == TypeRef::Kind::BoolArray);
}

TEST_CASE("empty class") {
    Program p = parse_program("class A {}");
    REQUIRE(p.classes.size() == 1);
    CHECK(p.classes[0].name == "A");
    CHECK(p.classes[0].fields.empty());
    CHECK(p.classes[0].methods.empty());
}

TEST_CASE("duplicate field is rejected") {
    CHECK_THROWS_AS(parse_program("class A { int f; int f; }"), SyntaxError);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_program("class A {\n  int f\n}");
        FAIL("no error");
    } catch (const SyntaxError& e) {
        CHECK(e.pos.line >= 2);
    }
}

TEST_CASE("abstract contract annotation") {
    auto specs = parse_annotations(
        "requires_abs computeGradeR; ensures_abs computeGradeE; assignable_abs computeGradeA;"
        " def computeGradeR = bonus >= 0; def computeGradeE = \\result == exam + bonus;"
        " def computeGradeA = \\nothing;");
    REQUIRE(count_kind(specs, TextualSpec::Kind::Contract) == 1);
    CHECK(count_kind(specs, TextualSpec::Kind::Def) == 3);
    auto contract = std::find_if(specs.begin(), specs.end(), [](const auto& s) { return s.kind == TextualSpec::Kind::Contract; });
    REQUIRE(contract->clauses.size() == 3);
    CHECK(contract->clauses[0].keyword == Keyword::RequiresAbs);
    CHECK(contract->clauses[0].ident == "computeGradeR");
    CHECK(contract->clauses[1].keyword == Keyword::EnsuresAbs);
    CHECK(contract->clauses[2].keyword == Keyword::AssignableAbs);
    for (const auto& s : specs) {
        if (s.kind == TextualSpec::Kind::Def && s.clauses[0].ident == "computeGradeA") CHECK(s.clauses[0].text == "\\nothing");
    }
}

TEST_CASE("abstract invariant annotation") {
    auto specs = parse_annotations("invariant_abs env; def env = x >= 0;");
    REQUIRE(specs.size() == 2);
    CHECK(count_kind(specs, TextualSpec::Kind::AbstractInvariant) == 1);
    CHECK(count_kind(specs, TextualSpec::Kind::Def) == 1);
}

TEST_CASE("concrete requires annotation") {
    auto specs = parse_annotations("requires true;");
    REQUIRE(specs.size() == 1);
    CHECK(specs[0].kind == TextualSpec::Kind::Contract);
    REQUIRE(specs[0].clauses.size() == 1);
    CHECK(specs[0].clauses[0].keyword == Keyword::Requires);
    CHECK(specs[0].clauses[0].text == "true");
}

TEST_CASE("annotation errors") {
    CHECK_THROWS_AS(parse_annotations("requires x > 0"), SyntaxError);
    CHECK_THROWS_AS(parse_annotations("requires_abs a b;"), SyntaxError);
    CHECK_THROWS_AS(parse_annotations("def = 3;"), SyntaxError);
    CHECK_THROWS_AS(parse_annotations("frobnicates x;"), SyntaxError);
}

TEST_CASE("every corpus program type-checks") {
    for (const char* rel : kAllCorpus) {
        CAPTURE(rel);
        auto r = typecheck(parse_program(read_text(path_of(rel))));
        CHECK(r.ok());
        CHECK(r.errors.empty());
    }
}

TEST_CASE("type errors") {
    SUBCASE("result in a void method") {
        CHECK_FALSE(typechecks("class A { int exam; /*@ ensures \\result == exam; @*/ void m() {} }"));
    }
    SUBCASE("old in a precondition") {
        CHECK_FALSE(typechecks("class A { int x; /*@ requires \\old(x) > 0; @*/ void m() {} }"));
    }
    SUBCASE("unknown name") {
        CHECK_FALSE(typechecks("class A { void m() { y = 1; } }"));
    }
    SUBCASE("ill-sorted condition") {
        CHECK_FALSE(typechecks("class A { void m() { if (1) { } } }"));
    }
    SUBCASE("well-typed") {
        CHECK(typechecks("class A { int x; /*@ requires x > 0; ensures \\old(x) == x; assignable \\nothing; @*/ void m() {} }"));
    }
}

TEST_CASE("printing and re-parsing is a fixed point") {
    for (const char* rel : kAllCorpus) {
        CAPTURE(rel);
        Program p = parse_program(read_text(path_of(rel)));
        std::string once = print_program(p);
        std::string twice = print_program(parse_program(once));
        CHECK(once == twice);
        CHECK(typecheck(parse_program(once)).ok());
    }
}

TEST_CASE("expression printing keeps precedence") {
    for (const char* text : {"a + b * c", "(a + b) * c", "a - (b - c)", "!(a && b) || c", "x ==> y ==> z",
                             "(\\forall int i; 0 <= i && i < n; a[i] > 0)", "c ? a : b", "-x % 3"}) {
        CAPTURE(text);
        std::string once = print_expr(*parse_expression(text));
        CHECK(print_expr(*parse_expression(once)) == once);
    }
    CHECK(print_expr(*parse_expression("(a + b) * c")).find('(') != std::string::npos);
}
