#include "abside/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "abside/persistence/proof_file.hpp"
#include "abside/prover/strategy.hpp"
#include "abside/surface/typecheck.hpp"

namespace abside::harness {

namespace fs = std::filesystem;

std::string to_string(SpecKind k) {
    switch (k) {
    case SpecKind::Abstract: return "abstract";
    case SpecKind::Partial: return "partial";
    case SpecKind::Concrete: return "concrete";
    }
    return "?";
}

SpecKind parse_spec_kind(const std::string& text) {
    for (SpecKind k : {SpecKind::Abstract, SpecKind::Partial, SpecKind::Concrete}) {
        if (to_string(k) == text) return k;
    }
    throw std::invalid_argument("unknown specification kind " + text + " (abstract, partial, concrete)");
}

std::string default_corpus_dir() {
    if (const char* env = std::getenv("ABSIDE_CORPUS"); env && *env) return env;
    return ABSIDE_DEFAULT_CORPUS;
}

const std::vector<Family>& corpus_families() {
    static const std::vector<Family> families{
        {"student", "StudentRecord", "passed"},
        {"account", "Transaction", "transfer"},
        {"log_begin", "Transaction", "transfer"},
        {"log_end", "Transaction", "transfer"},
    };
    return families;
}

const Family& find_family(const std::string& name) {
    for (const auto& f : corpus_families()) {
        if (f.name == name) return f;
    }
    throw std::invalid_argument("unknown corpus family " + name);
}

std::string program_path(const std::string& corpus_dir, const std::string& family, const std::string& version,
                         SpecKind kind) {
    return (fs::path(corpus_dir) / family / (version + "_" + to_string(kind) + ".mjml")).string();
}

std::vector<std::string> list_versions(const std::string& corpus_dir, const std::string& family, SpecKind kind,
                                       bool include_bug) {
    std::vector<std::string> out;
    fs::path dir = fs::path(corpus_dir) / family;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw std::runtime_error("no corpus directory " + dir.string());
    std::string suffix = "_" + to_string(kind) + ".mjml";
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() <= suffix.size() || name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        std::string version = name.substr(0, name.size() - suffix.size());
        if (version.rfind("bug", 0) == 0 && !include_bug) continue;
        out.push_back(version);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<const speclang::SpecEnv> load_env(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return std::make_shared<const speclang::SpecEnv>(surface::load_program(ss.str()));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

prover::Settings abstract_settings(prover::Settings base) {
    base.mode = prover::Mode::FinishAbstractProof;
    base.splits = false;
    return base;
}

std::string dump_open_goals(const prover::Proof& proof, std::size_t limit) {
    std::ostringstream os;
    std::size_t n = 0;
    for (const prover::ProofNode* g : proof.open_goals()) {
        if (n++ == limit) {
            os << "... " << proof.open_goals().size() - limit << " more open goals\n";
            break;
        }
        os << "open goal " << n << ":\n  " << g->seq.to_string() << "\n";
    }
    return os.str();
}

namespace {

struct Job {
    std::string version;
    VersionRow row;
    std::exception_ptr error;
};

// Runs f(i) for i in [0, n) on up to `jobs` threads; the first exception by
// index is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, std::vector<Job>& out, F f) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                f(i);
            } catch (...) {
                out[i].error = std::current_exception();
            }
        }
    };
    unsigned k = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& j : out) {
        if (j.error) std::rethrow_exception(j.error);
    }
}

std::int64_t symexec_nodes(const speclang::ProofObligation& po, prover::Settings s) {
    s.mode = prover::Mode::FinishSymbolicExecution;
    prover::Proof p(po);
    prover::run_auto(p, s);
    return count_stats(p).nodes;
}

void require_closed(const prover::Proof& p, const std::string& what) {
    if (!p.closed()) throw ExperimentError(what + " does not close\n" + dump_open_goals(p));
}

}  // namespace

ExperimentReport run_experiment(const std::string& family, const std::vector<SpecKind>& modes,
                                const ExperimentOptions& opts) {
    const Family& fam = find_family(family);
    ExperimentReport rep;
    for (SpecKind mode : modes) {
        auto versions = list_versions(opts.corpus_dir, family, mode, opts.include_bug);
        if (versions.empty()) continue;
        const std::int64_t n = static_cast<std::int64_t>(versions.size());
        auto label = [&](const std::string& v) {
            return fam.cls + "." + fam.method + " (" + family + " " + v + ", " + to_string(mode) + ")";
        };

        std::string saved;
        ProofStats partial{0, 0, false};
        if (mode != SpecKind::Concrete) {
            auto env = load_env(program_path(opts.corpus_dir, family, versions.front(), mode));
            prover::Proof p(speclang::build_proof_obligation(env, fam.cls, fam.method));
            prover::run_auto(p, abstract_settings(opts.settings));
            partial = count_stats(p);
            saved = persistence::serialize(p);
            if (!opts.save_dir.empty()) {
                persistence::save_to_file(
                    p, (fs::path(opts.save_dir) / (family + "_" + to_string(mode) + ".aproof")).string());
            }
        }

        std::vector<Job> jobs(versions.size());
        parallel_for(versions.size(), opts.jobs, jobs, [&](std::size_t i) {
            const std::string& v = versions[i];
            auto env = load_env(program_path(opts.corpus_dir, family, v, mode));
            auto po = speclang::build_proof_obligation(env, fam.cls, fam.method);
            VersionRow row;
            row.family = family;
            row.version = v;
            row.mode = mode;
            std::unique_ptr<prover::Proof> proof;
            if (mode == SpecKind::Concrete) {
                proof = std::make_unique<prover::Proof>(po);
            } else {
                try {
                    proof = persistence::replay(persistence::parse(saved), po);
                } catch (const persistence::ReplayError& e) {
                    throw ExperimentError("partial proof does not replay on " + label(v) + ": " + e.what());
                }
                row.partial = count_stats(*proof);
                if (row.partial.nodes != partial.nodes)
                    throw ExperimentError("replayed partial proof of " + label(v) + " has " +
                                          std::to_string(row.partial.nodes) + " nodes, recorded " +
                                          std::to_string(partial.nodes));
            }
            prover::run_auto(*proof, opts.settings);
            require_closed(*proof, label(v));
            row.full = count_stats(*proof);
            row.rest = row.full.nodes - row.partial.nodes;
            row.symexec_nodes = symexec_nodes(po, opts.settings);
            row.reuse_pct = reuse_ratio(row.partial.nodes, row.full.nodes);
            row.ape = amortized_effort(row.partial.nodes, n, row.rest);
            jobs[i].row = std::move(row);
        });

        ModeTotal t;
        t.family = family;
        t.mode = mode;
        t.partial = partial.nodes;
        t.versions = n;
        std::vector<std::int64_t> rests;
        for (auto& j : jobs) {
            rests.push_back(j.row.rest);
            rep.rows.push_back(std::move(j.row));
        }
        t.rest = total_effort(0, rests);
        t.total = total_effort(partial.nodes, rests);
        rep.totals.push_back(t);
    }
    return rep;
}

std::string format_text(const ExperimentReport& r) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "family" << std::setw(12) << "version" << std::setw(10) << "mode" << std::right
       << std::setw(9) << "partial" << std::setw(7) << "p.br" << std::setw(8) << "rest" << std::setw(8) << "full"
       << std::setw(7) << "f.br" << std::setw(9) << "symexec" << std::setw(8) << "reuse%" << std::setw(8) << "APE"
       << "\n";
    for (const auto& row : r.rows) {
        os << std::left << std::setw(10) << row.family << std::setw(12) << row.version << std::setw(10)
           << to_string(row.mode) << std::right << std::setw(9) << row.partial.nodes << std::setw(7)
           << row.partial.branches << std::setw(8) << row.rest << std::setw(8) << row.full.nodes << std::setw(7)
           << row.full.branches << std::setw(9) << row.symexec_nodes << std::setw(8) << row.reuse_pct << std::setw(8)
           << row.ape << "\n";
    }
    for (const auto& t : r.totals) {
        os << "total " << t.family << " " << to_string(t.mode) << ": partial " << t.partial << " + rests " << t.rest
           << " = " << t.total << " over " << t.versions << " versions\n";
    }
    return os.str();
}

std::string format_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "family,version,mode,partial_nodes,partial_branches,rest_nodes,full_nodes,full_branches,symexec_nodes,"
          "reuse_pct,ape\n";
    for (const auto& row : r.rows) {
        os << row.family << "," << row.version << "," << to_string(row.mode) << "," << row.partial.nodes << ","
           << row.partial.branches << "," << row.rest << "," << row.full.nodes << "," << row.full.branches << ","
           << row.symexec_nodes << "," << row.reuse_pct << "," << row.ape << "\n";
    }
    return os.str();
}

}  // namespace abside::harness
