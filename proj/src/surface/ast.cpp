#include "abside/surface/ast.hpp"

namespace abside::surface {

std::string TypeRef::to_string() const {
    switch (kind) {
    case Kind::Void: return "void";
    case Kind::Int: return "int";
    case Kind::Bool: return "boolean";
    case Kind::IntArray: return "int[]";
    case Kind::BoolArray: return "boolean[]";
    case Kind::Class: return cls;
    case Kind::Null: return "null";
    case Kind::Error: return "<error>";
    }
    return "?";
}

const char* binop_text(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Implies: return "==>";
    case BinOp::Equiv: return "<==>";
    }
    return "?";
}

namespace {
struct KwEntry {
    Keyword kw;
    const char* text;
};
const KwEntry kKeywords[] = {
    {Keyword::Requires, "requires"},         {Keyword::Ensures, "ensures"},
    {Keyword::Assignable, "assignable"},     {Keyword::RequiresAbs, "requires_abs"},
    {Keyword::EnsuresAbs, "ensures_abs"},    {Keyword::AssignableAbs, "assignable_abs"},
    {Keyword::Invariant, "invariant"},       {Keyword::InvariantAbs, "invariant_abs"},
    {Keyword::Def, "def"},                   {Keyword::LoopInvariant, "loop_invariant"},
    {Keyword::Decreases, "decreases"},
};
}  // namespace

const char* keyword_text(Keyword k) {
    for (const auto& e : kKeywords)
        if (e.kw == k) return e.text;
    return "?";
}

std::optional<Keyword> keyword_from_text(const std::string& s) {
    for (const auto& e : kKeywords)
        if (s == e.text) return e.kw;
    if (s == "modifies" || s == "assigns") return Keyword::Assignable;
    return std::nullopt;
}

const FieldDecl* ClassDecl::find_field(const std::string& n) const {
    for (const auto& f : fields)
        if (f.name == n) return &f;
    return nullptr;
}

const MethodDecl* ClassDecl::find_method(const std::string& n) const {
    for (const auto& m : methods)
        if (m.name == n) return &m;
    return nullptr;
}

const ClassDecl* Program::find_class(const std::string& n) const {
    for (const auto& c : classes)
        if (c.name == n) return &c;
    return nullptr;
}

ClassDecl* Program::find_class(const std::string& n) {
    for (auto& c : classes)
        if (c.name == n) return &c;
    return nullptr;
}

ExprPtr clone(const ExprPtr& e) {
    if (!e) return nullptr;
    auto c = std::make_shared<Expr>(*e);
    c->receiver = clone(e->receiver);
    for (auto& k : c->kids) k = clone(k);
    return c;
}

namespace {
TextualSpec clone_spec(const TextualSpec& s) {
    TextualSpec c = s;
    for (auto& cl : c.clauses)
        for (auto& e : cl.exprs) e = clone(e);
    return c;
}
}  // namespace

StmtPtr clone(const StmtPtr& s) {
    if (!s) return nullptr;
    auto c = std::make_shared<Stmt>(*s);
    c->target = clone(s->target);
    c->value = clone(s->value);
    for (auto& b : c->body) b = clone(b);
    for (auto& b : c->else_body) b = clone(b);
    if (s->loop) {
        c->loop = std::make_shared<LoopSpec>();
        c->loop->spec = clone_spec(s->loop->spec);
    }
    return c;
}

Program clone(const Program& p) {
    Program c = p;
    for (auto& cls : c.classes) {
        for (auto& s : cls.specs) s = clone_spec(s);
        for (auto& m : cls.methods) {
            for (auto& s : m.specs) s = clone_spec(s);
            for (auto& st : m.body) st = clone(st);
        }
    }
    return c;
}

}  // namespace abside::surface
