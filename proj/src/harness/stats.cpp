#include "abside/harness/stats.hpp"

#include <numeric>
#include <stdexcept>

namespace abside::harness {

namespace {

// Floor division for a positive divisor.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

}  // namespace

ProofStats count_stats(const prover::ProofNode& root) {
    ProofStats s{0, 0, true};
    prover::for_each_node(root, [&](const prover::ProofNode& n) {
        ++s.nodes;
        if (n.is_leaf()) ++s.branches;
        if (n.is_open_leaf()) s.closed = false;
    });
    return s;
}

ProofStats count_stats(const prover::Proof& proof) { return count_stats(proof.root()); }

std::int64_t total_effort(std::int64_t partial, const std::vector<std::int64_t>& rests) {
    return std::accumulate(rests.begin(), rests.end(), partial);
}

std::int64_t amortized_effort(std::int64_t partial, std::int64_t n, std::int64_t rest) {
    if (n < 1) throw std::invalid_argument("amortized effort needs at least one version");
    // rest is integral, so floor(partial/n + rest) = floor(partial/n) + rest.
    return floor_div(partial, n) + rest;
}

std::int64_t reuse_ratio(std::int64_t partial, std::int64_t full) {
    if (full <= 0) throw std::invalid_argument("reuse ratio needs a non-empty full proof");
    if (partial < 0) throw std::invalid_argument("reuse ratio needs a non-negative partial proof");
    return (200 * partial + full) / (2 * full);
}

}  // namespace abside::harness
