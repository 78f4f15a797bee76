#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abside/harness/experiment.hpp"
#include "abside/logic/syntax.hpp"
#include "abside/persistence/proof_file.hpp"
#include "abside/prover/strategy.hpp"
#include "abside/speclang/contract.hpp"

namespace {

using namespace abside;

enum Exit { kClosed = 0, kOpen = 1, kInputError = 2, kReplayError = 3 };

// Raised for anything wrong with the user's input; maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string source;
    std::string selector;
    std::string proof_file;
    std::string mode = "default";
    long budget = 50000;
    bool no_splits = false;
    int qlimit = 32;
    bool check_decreases = false;
    std::string out;
    std::string format = "text";
    unsigned jobs = 1;
    std::vector<std::string> families;
    std::vector<std::string> kinds{"abstract", "partial", "concrete"};
    bool include_bug = false;
};

prover::Settings settings_of(const Options& o) {
    prover::Settings s;
    try {
        s.mode = prover::parse_mode(o.mode);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    s.budget = o.budget;
    s.splits = !o.no_splits;
    s.qlimit = o.qlimit;
    s.check_decreases = o.check_decreases;
    return s;
}

std::shared_ptr<const speclang::SpecEnv> load(const std::string& path) {
    try {
        return harness::load_env(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

speclang::ProofObligation obligation(const std::shared_ptr<const speclang::SpecEnv>& env, const std::string& sel) {
    try {
        auto [cls, method] = speclang::parse_selector(env->program(), sel);
        return speclang::build_proof_obligation(env, cls, method);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

void print_stats(const std::string& label, const prover::Proof& p) {
    auto s = harness::count_stats(p);
    std::cout << label << ": nodes " << s.nodes << ", branches " << s.branches << ", "
              << (s.closed ? "closed" : "open (" + std::to_string(p.open_goals().size()) + " goals)") << "\n";
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write " + path);
}

int cmd_check(const Options& o) {
    auto env = load(o.source);
    std::size_t contracts = 0;
    for (const auto& c : env->program().classes) {
        for (const auto& m : c.methods) {
            try {
                env->contract(c.name, m.name);
            } catch (const std::exception& e) {
                throw InputError(c.name + "." + m.name + ": " + e.what());
            }
            ++contracts;
        }
    }
    for (const auto& d : env->typed().diagnostics) std::cerr << "note: " << d << "\n";
    std::cout << o.source << ": ok, " << env->program().classes.size() << " classes, " << contracts << " contracts\n";
    return kClosed;
}

int cmd_prove(const Options& o) {
    auto env = load(o.source);
    prover::Proof p(obligation(env, o.selector));
    auto r = prover::run_auto(p, settings_of(o));
    std::cout << "contract " << p.obligation().id() << " (" << o.mode << ")\n";
    print_stats("proof", p);
    if (r.budget_exhausted) std::cout << "budget of " << o.budget << " steps exhausted\n";
    if (!p.closed()) std::cerr << harness::dump_open_goals(p);
    return p.closed() ? kClosed : kOpen;
}

int cmd_abstract_prove(const Options& o) {
    auto env = load(o.source);
    prover::Proof p(obligation(env, o.selector));
    prover::run_auto(p, harness::abstract_settings(settings_of(o)));
    std::string out = o.out.empty() ? p.obligation().id() + ".aproof" : o.out;
    try {
        persistence::save_to_file(p, out);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    std::cout << "contract " << p.obligation().id() << "\n";
    print_stats("partial proof", p);
    std::cout << "saved " << out << "\n";
    return kClosed;
}

int cmd_reuse(const Options& o) {
    auto env = load(o.source);
    auto po = obligation(env, o.selector);
    persistence::ProofFile file;
    try {
        file = persistence::load_from_file(o.proof_file);
    } catch (const persistence::FormatError& e) {
        throw InputError(o.proof_file + ": " + e.what());
    }
    std::unique_ptr<prover::Proof> p;
    try {
        p = persistence::replay(file, std::move(po));
    } catch (const persistence::ReplayError& e) {
        std::cerr << "replay failed: " << e.what() << "\n";
        return kReplayError;
    }
    std::cout << "contract " << p->obligation().id() << "\n";
    print_stats("replayed", *p);
    auto r = prover::run_auto(*p, settings_of(o));
    print_stats("finished", *p);
    if (r.budget_exhausted) std::cout << "budget of " << o.budget << " steps exhausted\n";
    if (!p->closed()) std::cerr << harness::dump_open_goals(*p);
    return p->closed() ? kClosed : kOpen;
}

int cmd_experiment(const Options& o) {
    harness::ExperimentOptions eo;
    eo.settings = settings_of(o);
    eo.jobs = o.jobs;
    eo.include_bug = o.include_bug;
    std::vector<harness::SpecKind> kinds;
    try {
        for (const auto& k : o.kinds) kinds.push_back(harness::parse_spec_kind(k));
        std::vector<std::string> families = o.families;
        if (families.empty()) {
            for (const auto& f : harness::corpus_families()) families.push_back(f.name);
        }
        for (const auto& f : families) harness::find_family(f);
        harness::ExperimentReport all;
        for (const auto& f : families) {
            auto r = harness::run_experiment(f, kinds, eo);
            all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
            all.totals.insert(all.totals.end(), r.totals.begin(), r.totals.end());
        }
        write_output(o.out, o.format == "csv" ? harness::format_csv(all) : harness::format_text(all));
    } catch (const harness::ExperimentError& e) {
        std::cerr << e.what();
        return kOpen;
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
    return kClosed;
}

int cmd_dump(const Options& o) {
    auto env = load(o.source);
    auto po = obligation(env, o.selector);
    std::cout << po.initial.to_string() << "\n";
    return kClosed;
}

void add_strategy_flags(CLI::App* c, Options& o) {
    c->add_option("--mode", o.mode, "strategy mode: default, finish_symbolic_execution, finish_abstract_proof");
    c->add_option("--budget", o.budget, "maximal number of rule applications")->check(CLI::PositiveNumber);
    c->add_flag("--no-splits", o.no_splits, "disable proof-splitting first-order rules");
    c->add_option("--qlimit", o.qlimit, "largest range a bounded quantifier is expanded over")
        ->check(CLI::NonNegativeNumber);
    c->add_flag("--check-decreases", o.check_decreases, "prove loop termination");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Verifier for MiniJml programs with abstract method contracts and proof reuse"};
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "parse and type-check a program");
    check->add_option("source", o.source, "program file")->required();

    auto* prove = app.add_subcommand("prove", "prove a contract");
    prove->add_option("source", o.source, "program file")->required();
    prove->add_option("contract", o.selector, "Class.method[#0]")->required();
    add_strategy_flags(prove, o);

    auto* aprove = app.add_subcommand("abstract-prove", "build a partial proof and save it");
    aprove->add_option("source", o.source, "program file")->required();
    aprove->add_option("contract", o.selector, "Class.method[#0]")->required();
    aprove->add_option("-o,--out", o.out, "proof file (default <Class.method>.aproof)");
    add_strategy_flags(aprove, o);

    auto* reuse = app.add_subcommand("reuse", "replay a saved proof and finish it");
    reuse->add_option("source", o.source, "program file")->required();
    reuse->add_option("contract", o.selector, "Class.method[#0]")->required();
    reuse->add_option("proof", o.proof_file, "proof file")->required();
    add_strategy_flags(reuse, o);

    auto* exp = app.add_subcommand("experiment", "prove the corpus families and report proof sizes");
    exp->add_option("families", o.families, "families (default: all)");
    exp->add_option("--kinds", o.kinds, "specification kinds: abstract, partial, concrete")->delimiter(',');
    exp->add_option("-o,--out", o.out, "report file (default standard output)");
    exp->add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "csv"}));
    exp->add_option("--jobs", o.jobs, "versions proved in parallel")->check(CLI::PositiveNumber);
    exp->add_flag("--include-bug", o.include_bug, "include planted-bug versions");
    add_strategy_flags(exp, o);

    auto* dump = app.add_subcommand("dump-obligation", "print the initial sequent of a contract");
    dump->add_option("source", o.source, "program file")->required();
    dump->add_option("contract", o.selector, "Class.method[#0]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    try {
        if (*check) return cmd_check(o);
        if (*prove) return cmd_prove(o);
        if (*aprove) return cmd_abstract_prove(o);
        if (*reuse) return cmd_reuse(o);
        if (*exp) return cmd_experiment(o);
        if (*dump) return cmd_dump(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
