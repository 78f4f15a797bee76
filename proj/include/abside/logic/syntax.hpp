#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "abside/logic/term.hpp"

namespace abside::logic {

struct FuncDecl {
    Sort result;
    std::vector<Sort> args;
};

// Symbols needed to give every parsed name a sort. Logical variables are
// declared by their binders and never live here.
struct Signature {
    std::map<std::string, Sort> program_vars;
    std::map<std::string, FuncDecl> functions;

    void add_pvar(const std::string& name, Sort s) { program_vars[name] = std::move(s); }
    void add_func(const std::string& name, Sort result, std::vector<Sort> args = {}) {
        functions[name] = FuncDecl{std::move(result), std::move(args)};
    }
    // Collects every program variable and function symbol occurring in t.
    void absorb(const Term& t);
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& msg);
    std::size_t offset;
};

// Canonical rendering. Binary operators are fully parenthesized:
//   (a + b) (a - b) (a * b) (a / b) (a % b) neg(a)
//   (a = b) (a < b) (a <= b) !a (a & b) (a | b) (a -> b) (a <-> b)
//   \if (c) \then (a) \else (b)      (\forall int x; phi)
//   select<int>(h, o, C::f)  store(h, o, f, v)  anon(h, s, h2)  create(h, o)
//   empty  allLocs  allFields(o)  singleton(o, f)  (s \cup t)  (s \cap t)
//   (s \setminus t)  elementOf(o, f, s)  subset(s, t)  arr(i)  length
//   {x := t || y := u}phi          \[{C::m -> r} stmts \]phi
std::string to_string(const Term& t);
std::string to_string(const Update& u);

// Inverse of to_string for modality-free terms.
Term parse_term(const std::string& text, const Signature& sig);

}  // namespace abside::logic
