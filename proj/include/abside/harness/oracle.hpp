#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "abside/speclang/contract.hpp"

namespace abside::harness {

struct OracleConfig {
    std::int64_t int_lo = -2;
    std::int64_t int_hi = 2;
    int array_length = 3;
    // Length per array field ("Class::field"). Invariants of the form
    // `f.length == N` set the length of f unless it is listed here.
    std::map<std::string, int> array_lengths;
    // Precondition evaluations before the enumeration gives up.
    std::size_t max_evaluations = 20000000;
    long step_budget = 10000;
    bool prune = true;  // skip states whose verdict is already known
};

struct OracleReport {
    std::string contract;
    std::size_t space = 0;        // size of the pre-state space
    std::size_t states = 0;       // states covered, directly or by a skip
    std::size_t evaluations = 0;  // precondition evaluations
    std::size_t pre_states = 0;  // states satisfying pre and side conditions
    std::size_t vacuous = 0;     // of those, runs ending in a runtime error or divergence
    std::size_t violations = 0;
    bool exhaustive = true;
    std::string witness;  // first violating pre-state, empty if none

    bool ok() const { return violations == 0; }
};

// Runs C.m on every pre-state of a finite domain: the receiver, one object
// per class-typed parameter, one object per reachable class and one array
// per array field, with scalars ranging over [int_lo, int_hi]. Each run
// that starts in the precondition and terminates normally must satisfy the
// postcondition and write only assignable locations of pre-existing objects.
// Placeholders are expanded, so abstract contracts are checked by their
// definitions. When the precondition fails, all states that agree on the
// cells and parameters it read are skipped at once.
OracleReport check_contract(const speclang::SpecEnv& env, const std::string& cls, const std::string& method,
                            const OracleConfig& cfg = {});

}  // namespace abside::harness
