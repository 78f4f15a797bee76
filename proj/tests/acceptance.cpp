// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abside/harness/experiment.hpp"
#include "abside/harness/oracle.hpp"
#include "abside/harness/stats.hpp"
#include "abside/logic/simplify.hpp"
#include "abside/persistence/proof_file.hpp"
#include "abside/prover/strategy.hpp"
#include "support/corpus.hpp"
#include "support/random_terms.hpp"
#include "support/reference_tables.hpp"

using namespace abside;
using namespace abside::harness;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kFormulaSeconds = 1.0;
constexpr double kClosureSeconds = 60.0;
constexpr double kOracleSeconds = 30.0;
constexpr long kBudget = 50000;
constexpr std::int64_t kMinReusePercent = 30;
constexpr std::int64_t kBranchSlackPercent = 20;
constexpr int kRandomInstances = 1000;

struct Verdict {
    bool pass = true;
    std::string detail;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_seconds(double s) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << s << " s";
    return os.str();
}

const std::string& corpus() {
    static const std::string dir = default_corpus_dir();
    return dir;
}

// Every program file of the corpus with its family, excluding the planted bug.
struct ProgramFile {
    const Family* family;
    std::string version;
    SpecKind kind;
    std::string path;
};

std::vector<ProgramFile> program_files() {
    std::vector<ProgramFile> out;
    for (const auto& f : corpus_families()) {
        for (auto k : {SpecKind::Abstract, SpecKind::Partial, SpecKind::Concrete}) {
            for (const auto& v : list_versions(corpus(), f.name, k)) out.push_back({&f, v, k, program_path(corpus(), f.name, v, k)});
        }
    }
    return out;
}

std::size_t distinct_programs() {
    std::set<std::string> s;
    for (const auto& p : program_files()) s.insert(p.family->name + "/" + p.version);
    return s.size();
}

speclang::ProofObligation obligation(const std::string& path, const Family& f) {
    return speclang::build_proof_obligation(load_env(path), f.cls, f.method);
}

prover::Settings default_settings() {
    prover::Settings s;
    s.budget = kBudget;
    return s;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(ABSIDE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict formulas() {
    Clock clock;
    int checked = 0, wrong = 0;
    auto expect = [&](std::int64_t got, std::int64_t want) {
        ++checked;
        if (got != want) ++wrong;
    };
    for (const auto& cs : testing::case_studies()) {
        for (const auto* s : {&cs.completely, &cs.partially}) {
            expect(total_effort(s->partial, s->rests), s->total);
            for (std::size_t i = 0; i < s->rests.size(); ++i) {
                expect(amortized_effort(s->partial, static_cast<std::int64_t>(s->rests.size()), s->rests[i]), s->ape[i]);
                expect(s->partial + s->rests[i], s->fulls[i]);
            }
        }
        expect(total_effort(0, cs.concrete_fulls), cs.concrete_total);
    }
    for (const auto& l : testing::log_studies()) {
        std::vector<std::int64_t> rests;
        for (auto f : l.abstract_fulls) rests.push_back(f - l.partial);
        expect(total_effort(l.partial, rests), l.abstract_total);
        expect(total_effort(0, l.concrete_fulls), l.concrete_total);
    }
    for (const auto& r : testing::ratio_cells()) expect(reuse_ratio(r.part, r.whole), r.percent);
    double t = clock.seconds();
    return {wrong == 0 && t < kFormulaSeconds,
            std::to_string(checked - wrong) + "/" + std::to_string(checked) + " cells exact in " + fmt_seconds(t)};
}

Verdict closure() {
    Clock clock;
    int proofs = 0;
    std::vector<std::string> open;
    for (const auto& pf : program_files()) {
        prover::Proof p(obligation(pf.path, *pf.family));
        auto r = prover::run_auto(p, default_settings());
        ++proofs;
        if (!r.closed) open.push_back(pf.family->name + "/" + pf.version + "_" + to_string(pf.kind));
    }
    double t = clock.seconds();
    std::string detail = std::to_string(distinct_programs()) + " programs, " + std::to_string(proofs - open.size()) + "/" +
                         std::to_string(proofs) + " contract variants closed in " + fmt_seconds(t);
    for (const auto& o : open) detail += "; open: " + o;
    return {open.empty() && distinct_programs() == 13 && t < kClosureSeconds, detail};
}

Verdict partial_reuse() {
    bool ok = true;
    std::string detail;
    for (const auto& f : corpus_families()) {
        auto versions = list_versions(corpus(), f.name, SpecKind::Abstract);
        prover::Proof base(obligation(program_path(corpus(), f.name, versions.front(), SpecKind::Abstract), f));
        prover::run_auto(base, abstract_settings(default_settings()));
        auto partial = count_stats(base);
        auto file = persistence::parse(persistence::serialize(base));
        int good = 0;
        for (const auto& v : versions) {
            try {
                auto p = persistence::replay(file, obligation(program_path(corpus(), f.name, v, SpecKind::Abstract), f));
                bool same = count_stats(*p).nodes == partial.nodes;
                prover::run_auto(*p, default_settings());
                if (same && p->closed()) ++good;
            } catch (const persistence::ReplayError&) {
            }
        }
        ok = ok && good == static_cast<int>(versions.size());
        detail += (detail.empty() ? "" : ", ") + f.name + " " + std::to_string(good) + "/" + std::to_string(versions.size()) +
                  " (partial " + std::to_string(partial.nodes) + " nodes)";
    }
    return {ok, detail};
}

Verdict reuse_magnitude() {
    bool ok = true;
    std::string detail;
    ExperimentOptions opts;
    opts.settings = default_settings();
    for (const char* fam : {"student", "account"}) {
        auto r = run_experiment(fam, {SpecKind::Partial}, opts);
        std::int64_t best = 0;
        bool hit = false;
        for (const auto& row : r.rows) {
            if (100 * row.partial.nodes >= kMinReusePercent * row.full.nodes) hit = true;
            best = std::max(best, reuse_ratio(row.partial.nodes, row.full.nodes));
        }
        ok = ok && hit;
        detail += std::string(detail.empty() ? "" : ", ") + fam + " best " + std::to_string(best) + "%";
    }
    return {ok, detail + " (threshold " + std::to_string(kMinReusePercent) + "%)"};
}

Verdict branch_parity() {
    bool ok = true;
    int versions = 0;
    double worst = 0;
    ExperimentOptions opts;
    opts.settings = default_settings();
    for (const auto& f : corpus_families()) {
        auto r = run_experiment(f.name, {SpecKind::Abstract, SpecKind::Concrete}, opts);
        for (const auto& a : r.rows) {
            if (a.mode != SpecKind::Abstract) continue;
            for (const auto& c : r.rows) {
                if (c.mode != SpecKind::Concrete || c.version != a.version) continue;
                ++versions;
                worst = std::max(worst, static_cast<double>(a.full.branches) / static_cast<double>(c.full.branches));
                if (100 * a.full.branches > (100 + kBranchSlackPercent) * c.full.branches) ok = false;
            }
        }
    }
    std::ostringstream os;
    os.precision(3);
    os << versions << " versions, worst abstract/concrete branch ratio " << worst << " (limit 1.2)";
    return {ok && versions == 13, os.str()};
}

Verdict oracle() {
    Clock clock;
    int confirmed = 0, checked = 0;
    std::string detail;
    for (const auto& pf : program_files()) {
        auto env = load_env(pf.path);
        auto r = check_contract(*env, pf.family->cls, pf.family->method);
        ++checked;
        if (r.ok() && r.exhaustive && r.pre_states > 0) {
            ++confirmed;
        } else {
            detail += "; unconfirmed: " + pf.path;
        }
    }
    const Family& student = find_family("student");
    std::string bug = corpus() + "/student/bug_concrete.mjml";
    prover::Proof p(obligation(bug, student));
    bool bug_open = !prover::run_auto(p, default_settings()).closed;
    auto r = check_contract(*load_env(bug), student.cls, student.method);
    double t = clock.seconds();
    bool ok = confirmed == checked && bug_open && r.violations > 0 && t < kOracleSeconds;
    return {ok, std::to_string(confirmed) + "/" + std::to_string(checked) + " contracts confirmed; bug proof " +
                    (bug_open ? "open" : "CLOSED") + ", " + std::to_string(r.violations) + " violating states; " +
                    fmt_seconds(t) + detail};
}

Verdict logic_oracles() {
    using namespace abside::logic;
    int upd = 0, heap = 0, idem = 0;
    testing::TermGen gen(2024);
    for (int n = 0; n < kRandomInstances; ++n) {
        Update u = gen.update(2);
        Term t = gen.pick(2) ? gen.int_term(3) : gen.formula(3);
        Structure m = gen.random_structure();
        if (evaluate(apply_update(u, t), m) == evaluate(t, testing::run_update(u, m))) ++upd;
    }
    for (int n = 0; n < kRandomInstances; ++n) {
        Term t = gen.pick(2) ? gen.int_term(4) : gen.formula(4);
        Structure m = gen.random_structure();
        if (evaluate(simplify_heap(t), m) == evaluate(t, m)) ++heap;
    }
    for (int n = 0; n < kRandomInstances; ++n) {
        Update once = simplify_parallel(gen.update(2));
        if (testing::same_update(simplify_parallel(once), once)) ++idem;
    }
    bool ok = upd == kRandomInstances && heap == kRandomInstances && idem == kRandomInstances;
    return {ok, "update application " + std::to_string(upd) + ", heap simplification " + std::to_string(heap) +
                    ", parallel idempotence " + std::to_string(idem) + " of " + std::to_string(kRandomInstances)};
}

Verdict round_trip() {
    int identical = 0, total = 0;
    for (const auto& pf : program_files()) {
        if (pf.kind == SpecKind::Concrete) continue;
        prover::Proof p(obligation(pf.path, *pf.family));
        prover::run_auto(p, abstract_settings(default_settings()));
        std::string first = persistence::serialize(p);
        ++total;
        try {
            auto again = persistence::replay(persistence::parse(first), obligation(pf.path, *pf.family));
            if (persistence::serialize(*again) == first) ++identical;
        } catch (const std::exception&) {
        }
    }
    auto dir = fs::temp_directory_path() / "abside_acceptance_rt";
    fs::create_directories(dir);
    std::string proof = (dir / "passed.aproof").string();
    std::string renamed = (dir / "renamed.mjml").string();
    std::ofstream(renamed) << testing::replace_all(testing::read_text(testing::corpus_file("student", "v2_abstract")),
                                                   "computeGradeE", "gradeE");
    int made = run_cli("abstract-prove " + testing::corpus_file("student", "v1_abstract") + " StudentRecord.passed -o " + proof);
    int code = run_cli("reuse " + renamed + " StudentRecord.passed " + proof);
    fs::remove_all(dir);
    bool ok = identical == total && total > 0 && made == 0 && code == 3;
    return {ok, std::to_string(identical) + "/" + std::to_string(total) + " partial proofs byte-identical; rename exit code " +
                    std::to_string(code)};
}

Verdict flexibility() {
    const Family& f = find_family("student");
    std::string base = testing::read_text(testing::corpus_file("student", "v1_abstract"));
    prover::Proof p(speclang::build_proof_obligation(testing::env_of_source(base), f.cls, f.method));
    prover::run_auto(p, abstract_settings(default_settings()));
    auto file = persistence::parse(persistence::serialize(p));

    struct Mutation {
        const char* label;
        std::string from, to;
        bool replays;
    };
    const std::vector<Mutation> table{
        {"callee body", "return exam + bonus;", "int g = bonus; return exam + g;", true},
        {"def body", "def computeGradeE = \\result == exam + bonus;", "def computeGradeE = \\result == bonus + exam;", true},
        {"placeholder name", "computeGradeE", "gradeE", false},
        {"callee signature", "computeGrade()", "computeGrade(int k)", false},
        {"method signature", "boolean passed()", "boolean passed(int k)", false},
    };
    bool ok = true;
    std::string detail;
    for (const auto& m : table) {
        std::string src = testing::replace_all(base, m.from, m.to);
        // The call site follows the new callee signature.
        src = testing::replace_all(src, "computeGrade(int k) >=", "computeGrade(0) >=");
        bool replayed = false, closed = false;
        try {
            auto q = persistence::replay(file, speclang::build_proof_obligation(testing::env_of_source(src), f.cls, f.method));
            replayed = true;
            prover::run_auto(*q, default_settings());
            closed = q->closed();
        } catch (const persistence::ReplayError&) {
        }
        bool row_ok = replayed == m.replays && (!m.replays || closed);
        ok = ok && row_ok && src != base;
        detail += std::string(detail.empty() ? "" : ", ") + m.label + " " + (replayed ? "replays" : "rejected");
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"formula cells exact, under 1 s", formulas},
        {"corpus closes in default mode, under 60 s", closure},
        {"v1 abstract partial proof replays and finishes everywhere", partial_reuse},
        {"reuse share at least 30% under partially abstract specs", reuse_magnitude},
        {"abstract branches within 120% of concrete", branch_parity},
        {"finite-domain oracle agrees with the prover, under 30 s", oracle},
        {"random logic instances agree with the evaluator", logic_oracles},
        {"proof files round-trip byte-identically, rename exits 3", round_trip},
        {"flexibility matrix", flexibility},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
                  << v.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
