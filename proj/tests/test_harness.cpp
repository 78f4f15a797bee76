#include <doctest.h>

#include <stdexcept>
#include <string>

#include "abside/harness/experiment.hpp"
#include "abside/harness/interpreter.hpp"
#include "abside/harness/oracle.hpp"
#include "abside/harness/stats.hpp"
#include "support/corpus.hpp"
#include "support/reference_tables.hpp"

using namespace abside;
using namespace abside::harness;
using abside::logic::FieldKey;
using abside::logic::Loc;
using abside::logic::Value;
using abside::testing::corpus_env;
using abside::testing::env_of_source;

namespace {

prover::Proof tiny_proof() {
    auto env = env_of_source("class A { void m() { } }");
    auto po = speclang::build_proof_obligation(env, "A", "m");
    return prover::Proof(std::move(po));
}

prover::RuleApp app(const char* name) {
    prover::RuleApp a;
    a.rule = name;
    return a;
}

ExecState one_object(const std::string& cls) {
    ExecState st;
    st.types[1] = cls;
    st.next_id = 2;
    return st;
}

Loc field(const std::string& f) { return Loc{1, FieldKey::named(f)}; }

}  // namespace

TEST_CASE("count_stats") {
    SUBCASE("open root") {
        auto p = tiny_proof();
        auto s = count_stats(p);
        CHECK(s.nodes == 1);
        CHECK(s.branches == 1);
        CHECK_FALSE(s.closed);
    }
    SUBCASE("one application with two closed premisses") {
        auto p = tiny_proof();
        auto seq = p.root().seq;
        p.expand(p.root(), app("split"), {seq, seq});
        auto kids = std::vector<prover::ProofNode*>(p.open_goals().begin(), p.open_goals().end());
        for (auto* k : kids) p.expand(*k, app("closeTrue"), {});
        auto s = count_stats(p);
        CHECK(s.nodes == 3);
        CHECK(s.branches == 2);
        CHECK(s.closed);
    }
    SUBCASE("chain of five applications") {
        auto p = tiny_proof();
        auto seq = p.root().seq;
        for (int i = 0; i < 5; ++i) p.expand(*p.open_goals().front(), app("step"), {seq});
        auto s = count_stats(p);
        CHECK(s.nodes == 6);
        CHECK(s.branches == 1);
        CHECK_FALSE(s.closed);
    }
}

TEST_CASE("effort formulas reproduce the reference cells") {
    for (const auto& cs : testing::case_studies()) {
        CAPTURE(cs.name);
        for (const auto* series : {&cs.completely, &cs.partially}) {
            CHECK(total_effort(series->partial, series->rests) == series->total);
            auto n = static_cast<std::int64_t>(series->rests.size());
            for (std::size_t i = 0; i < series->rests.size(); ++i) {
                CHECK(series->partial + series->rests[i] == series->fulls[i]);
                CHECK(amortized_effort(series->partial, n, series->rests[i]) == series->ape[i]);
            }
        }
        CHECK(total_effort(0, cs.concrete_fulls) == cs.concrete_total);
    }
    for (const auto& r : testing::ratio_cells()) {
        CAPTURE(r.part);
        CAPTURE(r.whole);
        CHECK(reuse_ratio(r.part, r.whole) == r.percent);
    }
    for (const auto& l : testing::log_studies()) {
        std::vector<std::int64_t> rests;
        for (auto f : l.abstract_fulls) rests.push_back(f - l.partial);
        CHECK(total_effort(l.partial, rests) == l.abstract_total);
        CHECK(total_effort(0, l.concrete_fulls) == l.concrete_total);
    }
}

TEST_CASE("effort formula edge cases") {
    CHECK(total_effort(0, {}) == 0);
    CHECK(reuse_ratio(17, 17) == 100);
    CHECK(reuse_ratio(0, 5) == 0);
    CHECK(amortized_effort(514, 3, 677) == 848);
    CHECK_THROWS_AS(amortized_effort(1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(reuse_ratio(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(reuse_ratio(-1, 3), std::invalid_argument);
}

TEST_CASE("interpreter") {
    SUBCASE("computeGrade returns the sum and writes nothing") {
        auto env = corpus_env("student", "v1_concrete");
        Interpreter in(env->program());
        auto st = one_object("StudentRecord");
        st.heap[field("StudentRecord::exam")] = Value::integer(3);
        st.heap[field("StudentRecord::bonus")] = Value::integer(2);
        auto r = in.run("StudentRecord", "computeGrade", 1, {}, st);
        CHECK(r.outcome == Outcome::Normal);
        CHECK(r.result == Value::integer(5));
        CHECK(r.writes.empty());
        CHECK(r.state.heap == st.heap);
    }
    SUBCASE("a rejected update leaves the balance alone") {
        auto env = corpus_env("account", "v3_concrete");
        Interpreter in(env->program());
        auto st = one_object("Account");
        st.heap[field("Account::balance")] = Value::integer(0);
        auto r = in.run("Account", "update", 1, {Value::integer(-1)}, st);
        CHECK(r.outcome == Outcome::Normal);
        CHECK(r.result == Value::boolean(false));
        CHECK(r.state.heap == st.heap);
        auto ok = in.run("Account", "update", 1, {Value::integer(2)}, st);
        CHECK(ok.result == Value::boolean(true));
        CHECK(ok.state.heap.at(field("Account::balance")) == Value::integer(2));
        CHECK(ok.writes == std::set<Loc>{field("Account::balance")});
    }
    SUBCASE("loops, faults and divergence") {
        auto env = env_of_source(
            "class A { int f;"
            " void skip() { /*@ loop_invariant true; @*/ while (false) { f = 1; } }"
            " int div(int d) { return 7 / d; }"
            " void spin() { /*@ loop_invariant true; @*/ while (true) { f = f + 1; } }"
            " int sum(int n) { int s = 0; int i = 0; /*@ loop_invariant true; @*/ while (i < n) { s = s + i; i = i + 1; } return s; } }");
        Interpreter in(env->program(), 1000);
        auto st = one_object("A");
        st.heap[field("A::f")] = Value::integer(4);
        auto skip = in.run("A", "skip", 1, {}, st);
        CHECK(skip.outcome == Outcome::Normal);
        CHECK(skip.state.heap == st.heap);
        CHECK(in.run("A", "div", 1, {Value::integer(0)}, st).outcome == Outcome::RuntimeError);
        CHECK(in.run("A", "div", 1, {Value::integer(-2)}, st).result == Value::integer(-3));
        CHECK(in.run("A", "spin", 1, {}, st).outcome == Outcome::Diverged);
        CHECK(in.run("A", "sum", 1, {Value::integer(5)}, st).result == Value::integer(10));
    }
    SUBCASE("null receivers and array bounds fault") {
        auto env = env_of_source(
            "class A { int[] a; A next; int get(int i) { return a[i]; } int hop() { return next.get(0); } }");
        Interpreter in(env->program());
        auto st = one_object("A");
        CHECK(in.run("A", "get", 1, {Value::integer(0)}, st).outcome == Outcome::RuntimeError);
        CHECK(in.run("A", "hop", 1, {}, st).outcome == Outcome::RuntimeError);
        st.types[2] = "int[]";
        st.next_id = 3;
        st.heap[field("A::a")] = Value::ref(2);
        st.heap[Loc{2, FieldKey::named("length")}] = Value::integer(2);
        st.heap[Loc{2, FieldKey::slot(1)}] = Value::integer(9);
        CHECK(in.run("A", "get", 1, {Value::integer(1)}, st).result == Value::integer(9));
        CHECK(in.run("A", "get", 1, {Value::integer(2)}, st).outcome == Outcome::RuntimeError);
    }
}

TEST_CASE("oracle confirms correct contracts") {
    for (auto [fam, ver] : {std::pair{"student", "v1_concrete"}, {"student", "v2_abstract"}, {"account", "v1_concrete"}}) {
        auto env = corpus_env(fam, ver);
        const auto& f = find_family(fam);
        auto r = check_contract(*env, f.cls, f.method);
        CAPTURE(ver);
        CHECK(r.ok());
        CHECK(r.exhaustive);
        CHECK(r.pre_states > 0);
        CHECK(r.states == r.space);
    }
}

TEST_CASE("oracle finds the planted bug") {
    auto env = corpus_env("student", "bug_concrete");
    auto r = check_contract(*env, "StudentRecord", "passed");
    CHECK_FALSE(r.ok());
    CHECK(r.violations > 0);
    CHECK_FALSE(r.witness.empty());
}

TEST_CASE("oracle detects frame and postcondition violations") {
    auto env = env_of_source(
        "class A { int f; int g;"
        " /*@ ensures f == \\old(f) + 1; assignable f; @*/ void inc() { f = f + 1; g = 0; }"
        " /*@ ensures \\result >= f; assignable \\nothing; @*/ int up() { return f - 1; } }");
    auto frame = check_contract(*env, "A", "inc");
    CHECK(frame.violations > 0);
    auto post = check_contract(*env, "A", "up");
    CHECK(post.violations > 0);
    CHECK(post.violations == post.pre_states);
}

TEST_CASE("pruned and exhaustive enumeration agree") {
    OracleConfig full;
    full.prune = false;
    for (auto [fam, ver] : {std::pair{"student", "v1_concrete"}, {"student", "bug_concrete"}, {"account", "v4_concrete"}}) {
        auto env = corpus_env(fam, ver);
        const auto& f = find_family(fam);
        for (const auto& m : env->program().find_class(f.cls)->methods) {
            CAPTURE(ver);
            CAPTURE(m.name);
            auto a = check_contract(*env, f.cls, m.name);
            auto b = check_contract(*env, f.cls, m.name, full);
            CHECK(a.space == b.space);
            CHECK(a.states == b.states);
            CHECK(a.pre_states == b.pre_states);
            CHECK(a.violations == b.violations);
            CHECK(a.vacuous == b.vacuous);
            CHECK(a.witness == b.witness);
        }
    }
}

TEST_CASE("corpus layout") {
    std::string dir = default_corpus_dir();
    CHECK(list_versions(dir, "student", SpecKind::Concrete) == std::vector<std::string>{"v1", "v2", "v3"});
    CHECK(list_versions(dir, "student", SpecKind::Concrete, true).size() == 4);
    CHECK(list_versions(dir, "account", SpecKind::Partial).size() == 5);
    CHECK(list_versions(dir, "log_begin", SpecKind::Partial).empty());
    CHECK(parse_spec_kind(to_string(SpecKind::Partial)) == SpecKind::Partial);
    CHECK_THROWS_AS(parse_spec_kind("mostly"), std::invalid_argument);
    CHECK_THROWS(find_family("nope"));
    CHECK_THROWS_AS(load_env(dir + "/missing.mjml"), std::runtime_error);
}

TEST_CASE("experiment") {
    ExperimentOptions opts;
    SUBCASE("no modes, no rows") {
        auto r = run_experiment("student", {}, opts);
        CHECK(r.rows.empty());
        CHECK(r.totals.empty());
    }
    SUBCASE("abstract and concrete student runs") {
        auto r = run_experiment("student", {SpecKind::Abstract, SpecKind::Concrete}, opts);
        REQUIRE(r.rows.size() == 6);
        CHECK(r.totals.size() == 2);
        for (const auto& row : r.rows) {
            CHECK(row.full.closed);
            if (row.mode == SpecKind::Concrete) {
                CHECK(row.partial.nodes == 0);
            } else {
                CHECK(row.rest == row.full.nodes - row.partial.nodes);
                CHECK(row.reuse_pct == reuse_ratio(row.partial.nodes, row.full.nodes));
                CHECK(row.ape == amortized_effort(row.partial.nodes, 3, row.rest));
            }
            CHECK(row.symexec_nodes <= row.full.nodes);
        }
        for (const auto& t : r.totals) {
            std::int64_t sum = 0;
            for (const auto& row : r.rows) {
                if (row.mode == t.mode) sum += row.rest;
            }
            CHECK(t.total == t.partial + sum);
        }
        std::string csv = format_csv(r);
        CHECK(csv.rfind("family,version,mode,partial_nodes,partial_branches,rest_nodes,full_nodes,full_branches,"
                        "symexec_nodes,reuse_pct,ape",
                        0) == 0);
        CHECK_FALSE(format_text(r).empty());
    }
    SUBCASE("runs are deterministic, also in parallel") {
        auto a = format_csv(run_experiment("student", {SpecKind::Partial}, opts));
        opts.jobs = 3;
        auto b = format_csv(run_experiment("student", {SpecKind::Partial}, opts));
        CHECK(a == b);
    }
    SUBCASE("the planted bug aborts the experiment") {
        opts.include_bug = true;
        try {
            run_experiment("student", {SpecKind::Concrete}, opts);
            FAIL("no abort");
        } catch (const ExperimentError& e) {
            CHECK(std::string(e.what()).find("StudentRecord.passed") != std::string::npos);
        }
    }
}
