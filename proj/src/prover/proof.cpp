#include "abside/prover/proof.hpp"

#include <algorithm>
#include <functional>

namespace abside::prover {

std::string to_string(Mode m) {
    switch (m) {
    case Mode::Default: return "default";
    case Mode::FinishSymbolicExecution: return "finish_symbolic_execution";
    case Mode::FinishAbstractProof: return "finish_abstract_proof";
    }
    return "default";
}

Mode parse_mode(const std::string& text) {
    for (Mode m : {Mode::Default, Mode::FinishSymbolicExecution, Mode::FinishAbstractProof}) {
        if (to_string(m) == text) return m;
    }
    throw std::invalid_argument("unknown mode " + text);
}

Proof::Proof(speclang::ProofObligation po) : po_(std::move(po)), root_(std::make_unique<ProofNode>()) {
    root_->seq = po_.initial;
    open_.push_back(root_.get());
}

void for_each_node(const ProofNode& n, const std::function<void(const ProofNode&)>& f) {
    std::vector<const ProofNode*> stack{&n};
    while (!stack.empty()) {
        const ProofNode* p = stack.back();
        stack.pop_back();
        f(*p);
        for (auto it = p->children.rbegin(); it != p->children.rend(); ++it) stack.push_back(it->get());
    }
}

ProofStats Proof::stats() const {
    ProofStats s;
    for_each_node(*root_, [&](const ProofNode& n) {
        ++s.nodes;
        if (n.is_leaf()) ++s.branches;
    });
    s.open = open_.size();
    return s;
}

void Proof::expand(ProofNode& goal, RuleApp app, std::vector<logic::Sequent> premisses) {
    auto it = std::find(open_.begin(), open_.end(), &goal);
    if (it == open_.end() || goal.app) throw RuleError("node is not an open goal");
    app.branches = premisses.size();
    goal.app = std::move(app);
    std::list<ProofNode*> kids;
    for (auto& s : premisses) {
        auto child = std::make_unique<ProofNode>();
        child->seq = std::move(s);
        child->parent = &goal;
        kids.push_back(child.get());
        goal.children.push_back(std::move(child));
    }
    open_.splice(it, kids);
    open_.erase(it);
}

std::string Proof::fresh_name(const std::string& prefix) {
    for (int k = 1;; ++k) {
        std::string n = prefix + "'" + std::to_string(k);
        if (names_.insert(n).second) return n;
    }
}

bool Proof::reserve_name(const std::string& name) { return names_.insert(name).second; }

}  // namespace abside::prover
