#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/logic/sequent.hpp"
#include "abside/speclang/contract.hpp"

namespace abside::prover {

enum class Mode { Default, FinishSymbolicExecution, FinishAbstractProof };

std::string to_string(Mode m);
// Accepts the names printed by to_string; throws std::invalid_argument.
Mode parse_mode(const std::string& text);

struct Settings {
    Mode mode = Mode::Default;
    bool splits = true;  // proof-splitting first-order rules
    int qlimit = 32;     // largest range a bounded quantifier is expanded over
    long budget = 50000;
    bool check_decreases = false;
};

class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One recorded rule application. Closing rules have no position and no
// premisses.
struct RuleApp {
    std::string rule;
    std::optional<logic::Position> pos;
    std::size_t focus_hash = 0;  // hash of the focused subterm
    std::string inst;            // instantiation or callee identification
    std::vector<std::string> fresh;
    std::size_t branches = 0;
};

struct ProofNode {
    logic::Sequent seq;
    ProofNode* parent = nullptr;
    std::optional<RuleApp> app;
    std::vector<std::unique_ptr<ProofNode>> children;

    bool is_leaf() const { return children.empty(); }
    bool is_open_leaf() const { return !app; }
};

struct ProofStats {
    std::size_t nodes = 0;
    std::size_t branches = 0;  // leaves, closed or open
    std::size_t open = 0;
};

// A proof tree over an obligation. Fresh names are unique per tree.
class Proof {
public:
    explicit Proof(speclang::ProofObligation po);

    const speclang::ProofObligation& obligation() const { return po_; }
    ProofNode& root() { return *root_; }
    const ProofNode& root() const { return *root_; }

    // Open leaves from left to right.
    const std::list<ProofNode*>& open_goals() const { return open_; }
    bool closed() const { return open_.empty(); }
    ProofStats stats() const;

    // Attaches an application computed for `goal` together with its
    // premisses. `goal` must be an open leaf.
    void expand(ProofNode& goal, RuleApp app, std::vector<logic::Sequent> premisses);

    // prefix'k for the smallest k not used yet in this proof.
    std::string fresh_name(const std::string& prefix);
    // Marks a recorded name as taken; false when it was already used.
    bool reserve_name(const std::string& name);

    // Settings of the most recent automatic run, written to proof files.
    Settings settings;

private:
    speclang::ProofObligation po_;
    std::unique_ptr<ProofNode> root_;
    std::list<ProofNode*> open_;
    std::set<std::string> names_;
};

// Pre-order traversal.
void for_each_node(const ProofNode& n, const std::function<void(const ProofNode&)>& f);

}  // namespace abside::prover
