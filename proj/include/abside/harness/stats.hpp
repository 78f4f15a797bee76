#pragma once

#include <cstdint>
#include <vector>

#include "abside/prover/proof.hpp"

namespace abside::harness {

struct ProofStats {
    std::int64_t nodes = 1;     // rule applications with premisses + 1
    std::int64_t branches = 1;  // leaves
    bool closed = false;
};

ProofStats count_stats(const prover::Proof& proof);
ProofStats count_stats(const prover::ProofNode& root);

// Effort of proving n versions with one shared partial proof: the partial
// proof is counted once.
std::int64_t total_effort(std::int64_t partial, const std::vector<std::int64_t>& rests);

// floor(partial / n + rest). Throws std::invalid_argument unless n >= 1.
std::int64_t amortized_effort(std::int64_t partial, std::int64_t n, std::int64_t rest);

// 100 * partial / full rounded half up. Throws std::invalid_argument unless
// 0 <= partial and full > 0.
std::int64_t reuse_ratio(std::int64_t partial, std::int64_t full);

}  // namespace abside::harness
