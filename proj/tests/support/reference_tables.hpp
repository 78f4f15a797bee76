#pragma once

// Published proof-size cells used as an arithmetic regression fixture for
// total_effort, amortized_effort and reuse_ratio. Rest cells are raw input;
// totals, amortized efforts and ratios are the expected outputs.

#include <cstdint>
#include <vector>

namespace abside::testing {

struct AbstractSeries {
    std::int64_t partial;
    std::vector<std::int64_t> rests;
    std::vector<std::int64_t> fulls;  // partial + rest per version
    std::int64_t total;
    std::vector<std::int64_t> ape;
};

struct CaseStudy {
    const char* name;
    AbstractSeries completely;
    AbstractSeries partially;
    std::vector<std::int64_t> concrete_fulls;  // also the concrete amortized effort
    std::int64_t concrete_total;
};

inline const std::vector<CaseStudy>& case_studies() {
    static const std::vector<CaseStudy> k{
        {"account",
         {1390, {676, 492, 1045, 1329, 1349}, {2066, 1882, 2435, 2719, 2739}, 6281, {954, 770, 1323, 1607, 1627}},
         {1408, {457, 315, 488, 567, 619}, {1865, 1723, 1896, 1975, 2027}, 3854, {738, 596, 769, 848, 900}},
         {1035, 972, 1352, 1461, 1601},
         6421},
        {"student",
         {514, {677, 1292, 495}, {1191, 1806, 1009}, 2978, {848, 1463, 666}},
         {519, {626, 1263, 418}, {1145, 1782, 937}, 2826, {799, 1436, 591}},
         {919, 1419, 904},
         3242},
    };
    return k;
}

// part / whole -> percentage, for symbolic-execution shares and reuse shares.
struct RatioCell {
    std::int64_t part;
    std::int64_t whole;
    std::int64_t percent;
};

inline const std::vector<RatioCell>& ratio_cells() {
    static const std::vector<RatioCell> k{
        // symbolic execution share, account
        {842, 1041, 81}, {818, 981, 83}, {1037, 1361, 76}, {1147, 1471, 78}, {1141, 1655, 69},
        // symbolic execution share, student
        {442, 955, 46}, {494, 1451, 34}, {410, 853, 48},
        // call placement at the beginning: reuse share, then symbolic execution share
        {1403, 24012, 6}, {1403, 10974, 13}, {1403, 17060, 8},
        {1449, 25303, 6}, {1380, 5777, 24}, {1346, 16666, 8},
        // call placement at the end
        {1583, 4489, 35}, {1583, 4003, 40}, {1583, 4454, 36},
        {1206, 2692, 45}, {1115, 2141, 52}, {1118, 2666, 42},
        // best partially abstract reuse share
        {1408, 1723, 82},
    };
    return k;
}

// Log case studies: one partial proof, full sizes per version, concrete fulls.
struct LogStudy {
    std::int64_t partial;
    std::vector<std::int64_t> abstract_fulls;
    std::int64_t abstract_total;
    std::vector<std::int64_t> concrete_fulls;
    std::int64_t concrete_total;
};

inline const std::vector<LogStudy>& log_studies() {
    static const std::vector<LogStudy> k{
        {1403, {24012, 10974, 17060}, 49240, {25303, 5777, 16666}, 47746},
        {1583, {4489, 4003, 4454}, 9780, {2692, 2141, 2666}, 7499},
    };
    return k;
}

}  // namespace abside::testing
