#include "abside/logic/sort.hpp"

#include <stdexcept>

namespace abside::logic {

Sort Sort::of_class(std::string name) {
    Sort s(Kind::Class);
    s.cls_ = std::move(name);
    return s;
}

bool Sort::is_reference() const {
    return kind_ == Kind::Object || kind_ == Kind::Null || kind_ == Kind::Class || is_array();
}

Sort Sort::element() const {
    if (kind_ == Kind::IntArray) return integer();
    if (kind_ == Kind::BoolArray) return boolean();
    throw std::logic_error("element sort of non-array sort " + to_string());
}

bool Sort::is_subsort_of(const Sort& other) const {
    if (*this == other) return true;
    if (other.kind_ == Kind::Any) return true;
    if (other.kind_ == Kind::Object) return is_reference();
    if (kind_ == Kind::Null) return other.kind_ == Kind::Class || other.is_array();
    return false;
}

bool Sort::disjoint_references(const Sort& other) const {
    auto concrete = [](const Sort& s) { return s.kind_ == Kind::Class || s.is_array(); };
    return concrete(*this) && concrete(other) && *this != other;
}

std::string Sort::to_string() const {
    switch (kind_) {
    case Kind::Any: return "any";
    case Kind::Int: return "int";
    case Kind::Bool: return "boolean";
    case Kind::Heap: return "Heap";
    case Kind::Field: return "Field";
    case Kind::LocSet: return "LocSet";
    case Kind::Object: return "Object";
    case Kind::Null: return "Null";
    case Kind::Class: return cls_;
    case Kind::IntArray: return "int[]";
    case Kind::BoolArray: return "boolean[]";
    }
    return "?";
}

Sort Sort::parse(const std::string& t) {
    if (t == "any") return any();
    if (t == "int") return integer();
    if (t == "boolean") return boolean();
    if (t == "Heap") return heap();
    if (t == "Field") return field();
    if (t == "LocSet") return locset();
    if (t == "Object") return object();
    if (t == "Null") return null();
    if (t == "int[]") return int_array();
    if (t == "boolean[]") return bool_array();
    if (t.empty() || t.find_first_of("[] \t") != std::string::npos) throw std::invalid_argument("bad sort '" + t + "'");
    return of_class(t);
}

}  // namespace abside::logic
