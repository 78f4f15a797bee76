#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abside/surface/ast.hpp"

namespace abside::surface {

struct TypeError {
    SourcePos pos;
    std::string message;
    std::string to_string() const;
};

enum class PlaceholderKind { Requires, Ensures, Assignable, Invariant };
const char* placeholder_kind_text(PlaceholderKind k);

// Where an abstract clause was declared.
struct PlaceholderDecl {
    std::string name;
    PlaceholderKind kind = PlaceholderKind::Requires;
    std::string cls;
    std::string method;  // empty for invariants
    SourcePos pos;
};

struct TypedProgram {
    std::shared_ptr<const Program> program;
    std::map<std::string, PlaceholderDecl> placeholders;
    // Def clause per placeholder name (points into program).
    std::map<std::string, const Clause*> defs;
    std::vector<std::string> diagnostics;

    const ClassDecl& cls(const std::string& name) const;
    const MethodDecl& method(const std::string& cls, const std::string& name) const;
};

struct TypecheckResult {
    std::optional<TypedProgram> typed;
    std::vector<TypeError> errors;
    bool ok() const { return typed.has_value(); }
};

// Resolves names, assigns a type to every expression (including annotation
// clauses, which are parsed here) and reports every error found.
TypecheckResult typecheck(Program program);

// Parse + typecheck; throws std::runtime_error with all messages on failure.
TypedProgram load_program(const std::string& source);

}  // namespace abside::surface
