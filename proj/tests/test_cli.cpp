#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "support/corpus.hpp"

using abside::testing::corpus_file;
using abside::testing::read_text;
using abside::testing::replace_all;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the command line tool with standard error discarded.
Run cli(const std::string& args) {
    std::string cmd = std::string(ABSIDE_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch_dir() {
    auto d = std::filesystem::temp_directory_path() / "abside_cli_test";
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("check") {
    auto r = cli("check " + corpus_file("account", "v1_abstract"));
    CHECK(r.code == 0);
    CHECK(r.out.find("ok") != std::string::npos);
    CHECK(cli("check /nonexistent.mjml").code == 2);
}

TEST_CASE("prove") {
    auto r = cli("prove " + corpus_file("student", "v1_concrete") + " StudentRecord.passed");
    CHECK(r.code == 0);
    CHECK(r.out.find("closed") != std::string::npos);
    CHECK(cli("prove " + corpus_file("student", "bug_concrete") + " StudentRecord.passed").code == 1);
    CHECK(cli("prove " + corpus_file("student", "v1_concrete") + " StudentRecord.nope").code == 2);
    CHECK(cli("prove " + corpus_file("student", "v1_concrete") + " StudentRecord.passed --mode sideways").code == 2);
    CHECK(cli("prove " + corpus_file("student", "v1_concrete") + " StudentRecord.passed --budget 3").code == 1);
}

TEST_CASE("abstract-prove then reuse") {
    auto dir = scratch_dir();
    std::string proof = (dir / "passed.aproof").string();
    CHECK(cli("abstract-prove " + corpus_file("student", "v1_abstract") + " StudentRecord.passed -o " + proof).code == 0);
    REQUIRE(std::filesystem::exists(proof));

    auto r = cli("reuse " + corpus_file("student", "v2_abstract") + " StudentRecord.passed " + proof);
    CHECK(r.code == 0);
    CHECK(r.out.find("replayed") != std::string::npos);
    CHECK(r.out.find("finished") != std::string::npos);

    std::string renamed = (dir / "renamed.mjml").string();
    std::ofstream(renamed) << replace_all(read_text(corpus_file("student", "v2_abstract")), "computeGradeE", "gradeE");
    CHECK(cli("reuse " + renamed + " StudentRecord.passed " + proof).code == 3);

    std::string junk = (dir / "junk.aproof").string();
    std::ofstream(junk) << "garbage\n";
    CHECK(cli("reuse " + corpus_file("student", "v2_abstract") + " StudentRecord.passed " + junk).code == 2);
    CHECK(cli("reuse " + corpus_file("student", "v2_abstract") + " StudentRecord.passed").code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("dump-obligation is deterministic") {
    std::string args = "dump-obligation " + corpus_file("account", "v2_partial") + " Transaction.transfer";
    auto a = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out.find("==>") != std::string::npos);
    CHECK(cli(args).out == a.out);
}

TEST_CASE("experiment") {
    auto r = cli("experiment student --kinds concrete --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("family,version,mode", 0) == 0);
    CHECK(cli("experiment student --kinds concrete --include-bug").code == 1);
    CHECK(cli("experiment student --kinds vague").code == 2);
    CHECK(cli("experiment nowhere").code == 2);
}

TEST_CASE("usage errors") {
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("prove").code == 2);
    CHECK(cli("--help").code == 0);
}
