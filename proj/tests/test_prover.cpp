#include <doctest.h>

#include <map>
#include <string>

#include "abside/harness/stats.hpp"
#include "abside/persistence/proof_file.hpp"
#include "abside/prover/decision.hpp"
#include "abside/prover/rules.hpp"
#include "abside/prover/strategy.hpp"
#include "support/corpus.hpp"

using namespace abside;
using namespace abside::logic;
using abside::testing::corpus_env;
using abside::testing::env_of_source;

namespace {

// An obligation whose initial sequent is replaced by `seq`.
speclang::ProofObligation with_sequent(Sequent seq, std::shared_ptr<const speclang::SpecEnv> env = nullptr) {
    if (!env) env = env_of_source("class A { void m() { } }");
    const auto& cls = env->program().classes.at(0);
    auto po = speclang::build_proof_obligation(env, cls.name, cls.methods.at(0).name);
    po.initial = std::move(seq);
    return po;
}

Sequent succ_only(const Term& f) {
    Sequent s;
    s.add(Side::Succ, f);
    return s;
}

prover::Settings mode(prover::Mode m) {
    prover::Settings s;
    s.mode = m;
    return s;
}

std::map<std::string, int> rule_counts(const prover::Proof& p) {
    std::map<std::string, int> out;
    prover::for_each_node(p.root(), [&](const prover::ProofNode& n) {
        if (n.app) ++out[n.app->rule];
    });
    return out;
}

bool is_placeholder_atom(const speclang::SpecEnv& env, const Term& t) {
    return t.op() == Op::Func && env.find_placeholder(t.name()) != nullptr;
}

}  // namespace

TEST_CASE("ground arithmetic closes") {
    prover::Proof p(with_sequent(succ_only(gt(int_lit(2), int_lit(0)))));
    CHECK(prover::run_auto(p, {}).closed);
    CHECK(p.closed());
}

TEST_CASE("identical opaque atoms close without expansion") {
    Term r = func("R", Sort::boolean(), {pvar("heap", Sort::heap()), pvar("self", Sort::of_class("A"))});
    Sequent s;
    s.add(Side::Ante, r);
    s.add(Side::Succ, r);
    prover::Proof p(with_sequent(s));
    prover::run_auto(p, {});
    CHECK(p.closed());
    CHECK(rule_counts(p).count("closeAxiom") == 1);
}

TEST_CASE("a lone placeholder postcondition stays open") {
    auto env = corpus_env("student", "v1_abstract");
    Term e = func("computeGradeE", Sort::boolean(),
                  {pvar("heap", Sort::heap()), pvar("h0", Sort::heap()), pvar("s", Sort::of_class("StudentRecord")),
                   pvar("r", Sort::integer())});
    prover::Proof p(with_sequent(succ_only(e), env));
    auto r = prover::run_auto(p, mode(prover::Mode::FinishAbstractProof));
    CHECK_FALSE(r.closed);
    CHECK(p.open_goals().size() == 1);
}

TEST_CASE("a tautology closes in one step in every mode") {
    for (auto m : {prover::Mode::Default, prover::Mode::FinishSymbolicExecution, prover::Mode::FinishAbstractProof}) {
        prover::Proof p(with_sequent(succ_only(tt())));
        auto r = prover::run_auto(p, mode(m));
        CHECK(r.closed);
        CHECK(r.steps == 1);
        CHECK(harness::count_stats(p).nodes == 1);
    }
}

TEST_CASE("invalid sequents stay open") {
    Term x = pvar("x", Sort::integer());
    for (const Term& f : {gt(x, int_lit(0)), ff(), eq(x, add(x, int_lit(1)))}) {
        prover::Proof p(with_sequent(succ_only(f)));
        prover::run_auto(p, {});
        CHECK_FALSE(p.closed());
    }
}

TEST_CASE("decision procedure") {
    Term x = pvar("x", Sort::integer());
    Term y = pvar("y", Sort::integer());
    CHECK(prover::refute({lt(x, y), lt(y, x)}, {}));
    CHECK(prover::refute({le(int_lit(0), x)}, {le(int_lit(-1), x)}));
    CHECK(prover::refute({eq(mul(int_lit(2), x), int_lit(1))}, {}));
    CHECK_FALSE(prover::refute({lt(x, y)}, {}));
    Term f = func("f", Sort::integer(), {x});
    CHECK(prover::refute({eq(x, y)}, {eq(f, func("f", Sort::integer(), {y}))}));
}

TEST_CASE("rule selection is deterministic and respects the mode") {
    prover::Settings off = mode(prover::Mode::FinishAbstractProof);
    CHECK_FALSE(prover::rule_cost("expand_def_env1", off).has_value());
    CHECK_FALSE(prover::rule_cost("useClassInvariant", off).has_value());
    CHECK(prover::rule_cost("expand_def_env1", {}).has_value());
    CHECK(prover::rule_cost("expand_def_env1", {}) == prover::rule_cost("expand_def_other", {}));
    prover::Settings sym = mode(prover::Mode::FinishSymbolicExecution);
    CHECK(prover::rule_cost("assignLocal", sym).has_value());
}

TEST_CASE("partial proofs never expand placeholders or invariants") {
    auto env = corpus_env("student", "v1_abstract");
    prover::Proof p(speclang::build_proof_obligation(env, "StudentRecord", "passed"));
    prover::run_auto(p, harness::abstract_settings({}));
    CHECK_FALSE(p.closed());
    for (const auto& [rule, n] : rule_counts(p)) {
        CAPTURE(rule);
        CHECK(rule.rfind("expand_def", 0) != 0);
        CHECK(rule != "useClassInvariant");
    }
    // Every open goal is blocked by a placeholder atom.
    for (const auto* g : p.open_goals()) {
        bool blocked = false;
        for (auto s : {Side::Ante, Side::Succ}) {
            for (const auto& f : g->seq.side(s)) {
                visit(f, [&](const Term& t) {
                    if (is_placeholder_atom(*env, t)) blocked = true;
                    return !blocked;
                });
            }
        }
        CHECK(blocked);
        CHECK_FALSE(g->seq.has_modality());
    }
}

TEST_CASE("continuing a partial proof keeps it and closes") {
    auto env = corpus_env("student", "v1_abstract");
    prover::Proof p(speclang::build_proof_obligation(env, "StudentRecord", "passed"));
    prover::run_auto(p, harness::abstract_settings({}));
    auto before = harness::count_stats(p);
    std::string partial = persistence::serialize(p);
    prover::run_auto(p, {});
    auto after = harness::count_stats(p);
    CHECK(p.closed());
    CHECK(after.nodes > before.nodes);
    CHECK(after.branches >= before.branches);
    // The recorded steps of the partial proof are a prefix, node for node.
    auto first = persistence::parse(partial);
    auto full = persistence::parse(persistence::serialize(p));
    std::size_t matched = 0;
    for (const auto& step : first.steps) {
        for (const auto& s : full.steps) {
            if (s.app.rule == step.app.rule && s.app.focus_hash == step.app.focus_hash && s.app.inst == step.app.inst) {
                ++matched;
                break;
            }
        }
    }
    CHECK(matched == first.steps.size());
}

TEST_CASE("concrete corpus contracts close and the planted bug does not") {
    for (auto [fam, ver] : {std::pair{"student", "v1_concrete"}, {"student", "v3_partial"}, {"account", "v2_concrete"}}) {
        auto f = harness::find_family(fam);
        prover::Proof p(speclang::build_proof_obligation(corpus_env(fam, ver), f.cls, f.method));
        CAPTURE(ver);
        CHECK(prover::run_auto(p, {}).closed);
    }
    prover::Proof bug(speclang::build_proof_obligation(corpus_env("student", "bug_concrete"), "StudentRecord", "passed"));
    auto r = prover::run_auto(bug, {});
    CHECK_FALSE(r.closed);
    CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("the budget stops the search") {
    prover::Settings s;
    s.budget = 5;
    prover::Proof p(speclang::build_proof_obligation(corpus_env("student", "v1_concrete"), "StudentRecord", "passed"));
    auto r = prover::run_auto(p, s);
    CHECK(r.budget_exhausted);
    CHECK(r.steps == 5);
    CHECK_FALSE(p.closed());
}

TEST_CASE("proof search is deterministic") {
    auto run = [] {
        prover::Proof p(speclang::build_proof_obligation(corpus_env("account", "v3_partial"), "Transaction", "transfer"));
        prover::run_auto(p, {});
        return persistence::serialize(p);
    };
    CHECK(run() == run());
}

TEST_CASE("applying a rule that does not match throws") {
    prover::Proof p(with_sequent(succ_only(gt(int_lit(2), int_lit(0)))));
    prover::RuleApp app;
    app.rule = "assignLocal";
    app.pos = parse_position("@S0");
    CHECK_THROWS_AS(prover::apply_rule(p.root().seq, app, p, {}), prover::RuleError);
    prover::RuleApp unknown;
    unknown.rule = "expand_def_nothing";
    unknown.pos = parse_position("@S0");
    CHECK_THROWS_AS(prover::apply_rule(p.root().seq, unknown, p, {}), prover::RuleError);
}
