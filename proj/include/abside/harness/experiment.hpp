#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/harness/stats.hpp"
#include "abside/prover/proof.hpp"
#include "abside/speclang/contract.hpp"

namespace abside::harness {

// Specification variant of a corpus program.
enum class SpecKind { Abstract, Partial, Concrete };

std::string to_string(SpecKind k);
// Accepts the names printed by to_string; throws std::invalid_argument.
SpecKind parse_spec_kind(const std::string& text);

// ABSIDE_CORPUS if set, else the corpus directory of the source tree.
std::string default_corpus_dir();

// A corpus family: one program in several versions, each version in up to
// three specification variants stored as <dir>/<family>/<version>_<kind>.mjml.
struct Family {
    std::string name;
    std::string cls;  // top-level contract
    std::string method;
};

const std::vector<Family>& corpus_families();
const Family& find_family(const std::string& name);

// Versions with a file for the kind, in name order. The planted-bug version
// is left out unless asked for.
std::vector<std::string> list_versions(const std::string& corpus_dir, const std::string& family, SpecKind kind,
                                       bool include_bug = false);
std::string program_path(const std::string& corpus_dir, const std::string& family, const std::string& version,
                         SpecKind kind);

// Reads, parses and type-checks a program file; throws std::runtime_error.
std::shared_ptr<const speclang::SpecEnv> load_env(const std::string& path);

// Settings of a partial proof: placeholders and invariants stay closed and
// no proof splitting happens.
prover::Settings abstract_settings(prover::Settings base);

// A proof of the corpus did not close or a partial proof did not replay.
class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VersionRow {
    std::string family;
    std::string version;
    SpecKind mode = SpecKind::Concrete;
    ProofStats partial{0, 0, false};  // zero for concrete runs
    std::int64_t rest = 0;            // full.nodes - partial.nodes
    ProofStats full;
    std::int64_t symexec_nodes = 0;  // nodes when stopping after symbolic execution
    std::int64_t reuse_pct = 0;
    std::int64_t ape = 0;  // amortized effort
};

struct ModeTotal {
    std::string family;
    SpecKind mode = SpecKind::Concrete;
    std::int64_t partial = 0;
    std::int64_t rest = 0;   // sum of rests
    std::int64_t total = 0;  // total effort
    std::int64_t versions = 0;
};

struct ExperimentReport {
    std::vector<VersionRow> rows;
    std::vector<ModeTotal> totals;
};

struct ExperimentOptions {
    std::string corpus_dir = default_corpus_dir();
    prover::Settings settings;  // settings of the continuation and the concrete proofs
    unsigned jobs = 1;          // versions proved in parallel
    bool include_bug = false;
    // Where partial proofs are saved as <family>_<kind>.aproof; empty keeps them in memory.
    std::string save_dir;
};

// For an abstract kind: proves v1 partially, saves the proof, then replays it
// on every version and finishes it in the configured mode. For the concrete
// kind: proves every version directly. Kinds without files for the family
// are skipped.
ExperimentReport run_experiment(const std::string& family, const std::vector<SpecKind>& modes,
                                const ExperimentOptions& opts = {});

std::string format_text(const ExperimentReport& r);
// Header and one line per row.
std::string format_csv(const ExperimentReport& r);

// Open goals of a proof, one sequent per entry.
std::string dump_open_goals(const prover::Proof& proof, std::size_t limit = 3);

}  // namespace abside::harness
