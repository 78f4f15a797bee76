#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "abside/harness/stats.hpp"
#include "abside/logic/term.hpp"
#include "abside/persistence/proof_file.hpp"
#include "abside/prover/strategy.hpp"
#include "support/corpus.hpp"

using namespace abside;
using abside::testing::corpus_env;
using abside::testing::corpus_file;
using abside::testing::env_of_source;
using abside::testing::read_text;
using abside::testing::replace_all;

namespace {

speclang::ProofObligation passed_po(const std::string& version) {
    return speclang::build_proof_obligation(corpus_env("student", version), "StudentRecord", "passed");
}

std::string partial_proof_text() {
    prover::Proof p(passed_po("v1_abstract"));
    prover::run_auto(p, harness::abstract_settings({}));
    return persistence::serialize(p);
}

std::size_t lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("a single open node serializes to the header only") {
    prover::Proof p(passed_po("v1_abstract"));
    std::string text = persistence::serialize(p);
    CHECK(text.find(persistence::kFormatVersion) != std::string::npos);
    auto file = persistence::parse(text);
    CHECK(file.steps.empty());
    CHECK(file.contract.rfind("StudentRecord.passed", 0) == 0);
    auto r = persistence::replay(file, passed_po("v1_abstract"));
    CHECK(r->root().is_open_leaf());
    CHECK(r->root().seq == p.root().seq);
}

TEST_CASE("applications are recorded in pre-order") {
    auto env = env_of_source("class A { int f; /*@ requires f > 0; ensures f > 0; assignable \\nothing; @*/ void m() { } }");
    prover::Proof p(speclang::build_proof_obligation(env, "A", "m"));
    prover::run_auto(p, {});
    REQUIRE(p.closed());
    std::size_t apps = 0;
    prover::for_each_node(p.root(), [&](const prover::ProofNode& n) { apps += n.app.has_value(); });
    auto file = persistence::parse(persistence::serialize(p));
    REQUIRE(file.steps.size() == apps);
    for (std::size_t i = 1; i < file.steps.size(); ++i) CHECK(file.steps[i - 1].node < file.steps[i].node);
}

TEST_CASE("save, replay and save again is byte-identical") {
    std::string text = partial_proof_text();
    auto replayed = persistence::replay(persistence::parse(text), passed_po("v1_abstract"));
    CHECK(persistence::serialize(*replayed) == text);
}

TEST_CASE("a partial proof replays on another version and finishes") {
    std::string text = partial_proof_text();
    auto file = persistence::parse(text);
    for (const char* v : {"v2_abstract", "v3_abstract"}) {
        CAPTURE(v);
        auto p = persistence::replay(file, passed_po(v));
        prover::Proof original(passed_po("v1_abstract"));
        prover::run_auto(original, harness::abstract_settings({}));
        CHECK(harness::count_stats(*p).nodes == harness::count_stats(original).nodes);
        prover::run_auto(*p, {});
        CHECK(p->closed());
    }
}

TEST_CASE("renaming a placeholder breaks replay") {
    std::string src = replace_all(read_text(corpus_file("student", "v2_abstract")), "computeGradeE", "gradeE");
    auto po = speclang::build_proof_obligation(env_of_source(src), "StudentRecord", "passed");
    CHECK_THROWS_AS(persistence::replay(persistence::parse(partial_proof_text()), std::move(po)), persistence::ReplayError);
}

TEST_CASE("a proof for another contract is rejected") {
    auto file = persistence::parse(partial_proof_text());
    auto po = speclang::build_proof_obligation(corpus_env("student", "v1_abstract"), "StudentRecord", "computeGrade");
    CHECK_THROWS_AS(persistence::replay(file, std::move(po)), persistence::ReplayError);
}

TEST_CASE("malformed files") {
    CHECK_THROWS_AS(persistence::parse(""), persistence::FormatError);
    CHECK_THROWS_AS(persistence::parse("not a proof\n"), persistence::FormatError);
    std::string text = partial_proof_text();
    CHECK_THROWS_AS(persistence::parse(replace_all(text, persistence::kFormatVersion, "aproof/99")), persistence::FormatError);
    // A malformed step line after valid ones.
    std::string cut = text.substr(0, text.size() - text.size() / 3);
    cut = cut.substr(0, cut.rfind('\n') + 1) + "step\n";
    CHECK_THROWS_AS(persistence::parse(cut), persistence::FormatError);
    CHECK(lines(text) > 10);
}

TEST_CASE("files on disk") {
    auto path = std::filesystem::temp_directory_path() / "abside_persistence_test.aproof";
    prover::Proof p(passed_po("v1_abstract"));
    prover::run_auto(p, harness::abstract_settings({}));
    persistence::save_to_file(p, path.string());
    auto file = persistence::load_from_file(path.string());
    CHECK(persistence::serialize(*persistence::replay(file, passed_po("v1_abstract"))) == persistence::serialize(p));
    CHECK(file.settings.mode == prover::Mode::FinishAbstractProof);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(persistence::load_from_file(path.string()), persistence::FormatError);
}
