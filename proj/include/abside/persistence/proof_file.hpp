#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/prover/proof.hpp"

namespace abside::persistence {

inline constexpr const char* kFormatVersion = "aproof/1";

// Malformed proof file text.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The recorded proof does not fit the obligation it is replayed on.
class ReplayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RecordedStep {
    std::size_t node = 0;  // pre-order index of the node in the tree
    prover::RuleApp app;
};

struct ProofFile {
    std::string contract;  // Class.method#index
    prover::Settings settings;
    std::vector<RecordedStep> steps;  // pre-order
};

// Text form:
//   aproof/1
//   contract C.m#0
//   mode <mode>  splits on|off  qlimit N  budget N  decreases on|off  (one per line)
//   <node> <rule> <@position|@G> #<focus hash> inst="<text>" fresh=<a,b,...> branches=<n>
// Lines starting with '#' are comments.
std::string serialize(const prover::Proof& proof);
ProofFile parse(const std::string& text);

// Rebuilds the recorded tree on a fresh obligation. Rule applicability,
// focus hashes, callee contracts and fresh names are checked step by step.
std::unique_ptr<prover::Proof> replay(const ProofFile& file, speclang::ProofObligation po);

void save_to_file(const prover::Proof& proof, const std::string& path);
ProofFile load_from_file(const std::string& path);

}  // namespace abside::persistence
