#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/logic/term.hpp"

namespace abside::logic {

// A field value: a named Field constant or an array slot arr(index).
struct FieldKey {
    std::string name;  // empty for array slots
    std::int64_t index = 0;

    static FieldKey named(std::string n) { return {std::move(n), 0}; }
    static FieldKey slot(std::int64_t i) { return {{}, i}; }
    bool is_slot() const { return name.empty(); }
    friend auto operator<=>(const FieldKey&, const FieldKey&) = default;
};

// Object identities are positive integers; 0 is null.
using ObjId = std::int64_t;
struct Loc {
    ObjId obj = 0;
    FieldKey field;
    friend auto operator<=>(const Loc&, const Loc&) = default;
};

struct Value;
using HeapCells = std::map<Loc, Value>;
using LocSetVal = std::set<Loc>;

// Values of the finite-domain semantics. Heaps are total maps whose missing
// cells read as the zero of the requested sort (0, false, null).
struct Value {
    enum class Kind { Int, Bool, Ref, Field, Heap, LocSet };
    Kind kind = Kind::Int;
    std::int64_t i = 0;  // int value, bool 0/1, object id
    FieldKey f;
    std::shared_ptr<const HeapCells> heap;
    std::shared_ptr<const LocSetVal> locs;

    static Value integer(std::int64_t v) { return {Kind::Int, v, {}, nullptr, nullptr}; }
    static Value boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}, nullptr, nullptr}; }
    static Value ref(ObjId o) { return {Kind::Ref, o, {}, nullptr, nullptr}; }
    static Value field(FieldKey k) { return {Kind::Field, 0, std::move(k), nullptr, nullptr}; }
    static Value of_heap(HeapCells c) { return {Kind::Heap, 0, {}, std::make_shared<const HeapCells>(std::move(c)), nullptr}; }
    static Value of_locs(LocSetVal s) { return {Kind::LocSet, 0, {}, nullptr, std::make_shared<const LocSetVal>(std::move(s))}; }

    bool truth() const { return i != 0; }
    std::string to_string() const;
    friend bool operator==(const Value& a, const Value& b);
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

// Zero of a sort: 0, false, null.
Value zero_value(const Sort& s);

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Interpretation of program variables, logical variables, rigid functions and
// the finite quantifier domains.
struct Structure {
    std::map<std::string, Value> pvars;
    std::map<std::string, Value> lvars;
    std::map<std::string, std::function<Value(const std::vector<Value>&)>> funcs;

    std::int64_t int_lo = -3;
    std::int64_t int_hi = 3;
    // Objects per class name; the Object sort ranges over all of them.
    std::map<std::string, std::vector<ObjId>> objects;
    std::vector<FieldKey> fields;  // Field quantifier domain, also allLocs/allFields

    // Observers of heap selects and program variable reads, if set.
    std::function<void(const HeapCells&, const Loc&)> on_select;
    std::set<std::string>* read_pvars = nullptr;

    std::vector<ObjId> objects_of(const Sort& s) const;
    LocSetVal universe() const;
};

// Evaluates t; modalities and uninterpreted symbols raise EvalError.
Value evaluate(const Term& t, const Structure& m);

}  // namespace abside::logic
