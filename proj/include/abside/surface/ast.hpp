#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace abside::surface {

struct SourcePos {
    int line = 0;
    int col = 0;
};

struct TypeRef {
    enum class Kind { Void, Int, Bool, IntArray, BoolArray, Class, Null, Error };
    Kind kind = Kind::Error;
    std::string cls;

    static TypeRef void_() { return {Kind::Void, {}}; }
    static TypeRef int_() { return {Kind::Int, {}}; }
    static TypeRef bool_() { return {Kind::Bool, {}}; }
    static TypeRef null_() { return {Kind::Null, {}}; }
    static TypeRef error() { return {Kind::Error, {}}; }
    static TypeRef class_(std::string name) { return {Kind::Class, std::move(name)}; }

    bool is_reference() const {
        return kind == Kind::Class || kind == Kind::IntArray || kind == Kind::BoolArray || kind == Kind::Null;
    }
    bool is_array() const { return kind == Kind::IntArray || kind == Kind::BoolArray; }
    std::string to_string() const;
    friend bool operator==(const TypeRef& a, const TypeRef& b) { return a.kind == b.kind && a.cls == b.cls; }
    friend bool operator!=(const TypeRef& a, const TypeRef& b) { return !(a == b); }
};

enum class ExprKind {
    IntLit,
    BoolLit,
    Null,
    Name,
    This,
    Result,
    FieldAccess,  // receiver.name; `length` on arrays
    ArrayAccess,  // receiver[index]; index null means `[*]` (store-refs only)
    Call,         // receiver (optional) . name (args)
    Unary,
    Binary,
    Cond,
    Old,
    Quant,
    InvariantFor,
    Fresh,
    NewArray,
    Everything,
    Nothing,
};

enum class UnOp { Not, Neg };
enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies, Equiv };

const char* binop_text(BinOp op);

// How an identifier was resolved by the type checker.
enum class NameKind { Unresolved, Local, Param, Field, Constant, Bound };

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
    ExprKind kind = ExprKind::IntLit;
    SourcePos pos;
    std::int64_t ival = 0;
    bool bval = false;
    std::string name;
    UnOp uop = UnOp::Not;
    BinOp bop = BinOp::Add;
    ExprPtr receiver;           // FieldAccess / ArrayAccess / Call / Old / InvariantFor / Fresh operand
    std::vector<ExprPtr> kids;  // operands, call arguments, quantifier guard+body, array index
    bool forall = true;         // Quant
    TypeRef decl_type;          // Quant bound variable, NewArray element array type

    // Filled by the type checker.
    TypeRef type = TypeRef::error();
    NameKind name_kind = NameKind::Unresolved;
    std::string owner;          // class declaring the field or method
    bool is_length = false;     // FieldAccess of an array length
};

enum class StmtKind { LocalDecl, Assign, ExprStmt, If, While, Return, Block };

struct LoopSpec;
struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Stmt {
    StmtKind kind = StmtKind::Block;
    SourcePos pos;
    TypeRef decl_type;          // LocalDecl
    std::string name;           // LocalDecl
    ExprPtr target;             // Assign lvalue
    ExprPtr value;              // initializer, rhs, condition, returned value, call
    std::vector<StmtPtr> body;  // Block, then-branch, loop body
    std::vector<StmtPtr> else_body;
    bool has_else = false;
    std::shared_ptr<LoopSpec> loop;  // While
};

enum class Keyword {
    Requires,
    Ensures,
    Assignable,
    RequiresAbs,
    EnsuresAbs,
    AssignableAbs,
    Invariant,
    InvariantAbs,
    Def,
    LoopInvariant,
    Decreases,
};

const char* keyword_text(Keyword k);
std::optional<Keyword> keyword_from_text(const std::string& s);

struct Clause {
    Keyword keyword = Keyword::Requires;
    std::string text;   // expression text; empty for abstract declarations
    std::string ident;  // declared placeholder or defined symbol
    SourcePos pos;
    // Filled by the type checker: one expression, or the store-refs of an assignable clause.
    std::vector<ExprPtr> exprs;
};

struct TextualSpec {
    enum class Kind { Contract, Invariant, AbstractInvariant, Def, LoopSpec };
    Kind kind = Kind::Contract;
    std::vector<Clause> clauses;
    std::string visibility;  // "public", "private", ... or empty
    std::string behavior;    // "normal_behavior" or empty
    std::vector<std::string> modifiers;  // pure, spec_public, helper
    SourcePos pos;
};

struct LoopSpec {
    TextualSpec spec;
};

struct Param {
    std::string name;
    TypeRef type;
};

struct FieldDecl {
    std::string name;
    TypeRef type;
    bool is_final = false;
    std::optional<std::int64_t> constant;  // final field with literal initializer
    SourcePos pos;
};

struct MethodDecl {
    std::string name;
    std::string cls;
    std::vector<Param> params;
    TypeRef ret = TypeRef::void_();
    std::vector<StmtPtr> body;
    std::vector<TextualSpec> specs;  // contract cases in source order
    bool pure = false;
    std::vector<std::string> modifiers;
    SourcePos pos;
};

struct ClassDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    std::vector<TextualSpec> specs;  // invariants, abstract invariants, defs
    std::vector<std::string> modifiers;
    SourcePos pos;

    const FieldDecl* find_field(const std::string& n) const;
    const MethodDecl* find_method(const std::string& n) const;
};

struct Program {
    std::vector<ClassDecl> classes;
    std::vector<std::string> diagnostics;  // non-fatal notes (ignored contract cases)

    const ClassDecl* find_class(const std::string& n) const;
    ClassDecl* find_class(const std::string& n);
};

// Deep copies so that a type-checked program never aliases its input.
ExprPtr clone(const ExprPtr& e);
StmtPtr clone(const StmtPtr& s);
Program clone(const Program& p);

}  // namespace abside::surface
