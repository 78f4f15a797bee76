#pragma once

#include <string>
#include <vector>

#include "abside/surface/ast.hpp"

namespace abside::surface {

// Re-parseable renderings; compound operands are always parenthesized.
std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_stmts(const std::vector<StmtPtr>& stmts, int indent = 0);
// Single-line rendering used inside modalities.
std::string print_stmts_inline(const std::vector<std::shared_ptr<const Stmt>>& stmts);
std::string print_spec(const TextualSpec& s, int indent = 0);
std::string print_program(const Program& p);

}  // namespace abside::surface
