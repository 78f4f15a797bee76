#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "abside/surface/ast.hpp"

namespace abside::surface {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourcePos pos, const std::string& msg);
    SourcePos pos;
};

Program parse_program(const std::string& source);

// Classifies the clauses of one annotation comment. The text may still carry
// its `@` markers. Contract cases separated by `also` become separate values;
// every `def` clause becomes its own Def spec.
std::vector<TextualSpec> parse_annotations(const std::string& comment, SourcePos pos = {});

ExprPtr parse_expression(const std::string& text, SourcePos base = {});
// Comma-separated store-refs of an assignable clause.
std::vector<ExprPtr> parse_store_refs(const std::string& text, SourcePos base = {});
std::vector<StmtPtr> parse_statements(const std::string& text);

}  // namespace abside::surface
