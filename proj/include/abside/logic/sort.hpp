#pragma once

#include <cstdint>
#include <string>

namespace abside::logic {

// Sorts of the logic. Class and array sorts are subsorts of Object;
// Null is below every class and array sort; everything is below Any.
class Sort {
public:
    enum class Kind : std::uint8_t {
        Any,
        Int,
        Bool,
        Heap,
        Field,
        LocSet,
        Object,
        Null,
        Class,
        IntArray,
        BoolArray,
    };

    Sort() = default;
    explicit Sort(Kind k) : kind_(k) {}

    static Sort any() { return Sort(Kind::Any); }
    static Sort integer() { return Sort(Kind::Int); }
    static Sort boolean() { return Sort(Kind::Bool); }
    static Sort heap() { return Sort(Kind::Heap); }
    static Sort field() { return Sort(Kind::Field); }
    static Sort locset() { return Sort(Kind::LocSet); }
    static Sort object() { return Sort(Kind::Object); }
    static Sort null() { return Sort(Kind::Null); }
    static Sort int_array() { return Sort(Kind::IntArray); }
    static Sort bool_array() { return Sort(Kind::BoolArray); }
    static Sort of_class(std::string name);

    Kind kind() const { return kind_; }
    const std::string& class_name() const { return cls_; }

    bool is_bool() const { return kind_ == Kind::Bool; }
    bool is_int() const { return kind_ == Kind::Int; }
    // Object, Null, class and array sorts.
    bool is_reference() const;
    bool is_array() const { return kind_ == Kind::IntArray || kind_ == Kind::BoolArray; }
    // Element sort of an array sort.
    Sort element() const;

    // Reflexive subsort test.
    bool is_subsort_of(const Sort& other) const;
    // Two reference sorts whose only common value is null.
    bool disjoint_references(const Sort& other) const;

    std::string to_string() const;
    // Inverse of to_string; throws std::invalid_argument on junk.
    static Sort parse(const std::string& text);

    friend bool operator==(const Sort& a, const Sort& b) {
        return a.kind_ == b.kind_ && a.cls_ == b.cls_;
    }
    friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }
    friend bool operator<(const Sort& a, const Sort& b) {
        return a.kind_ != b.kind_ ? a.kind_ < b.kind_ : a.cls_ < b.cls_;
    }

private:
    Kind kind_ = Kind::Any;
    std::string cls_;
};

}  // namespace abside::logic
