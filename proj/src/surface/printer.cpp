#include "abside/surface/printer.hpp"

#include <sstream>

namespace abside::surface {

namespace {

bool atomic(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Binary:
    case ExprKind::Cond:
    case ExprKind::Unary:
        return false;
    case ExprKind::IntLit:
        return e.ival >= 0;
    default:
        return true;
    }
}

std::string operand(const ExprPtr& e) {
    std::string s = print_expr(*e);
    return atomic(*e) ? s : "(" + s + ")";
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

}  // namespace

std::string print_expr(const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit: return std::to_string(e.ival);
    case ExprKind::BoolLit: return e.bval ? "true" : "false";
    case ExprKind::Null: return "null";
    case ExprKind::Name: return e.name;
    case ExprKind::This: return "this";
    case ExprKind::Result: return "\\result";
    case ExprKind::Everything: return "\\everything";
    case ExprKind::Nothing: return "\\nothing";
    case ExprKind::FieldAccess: return operand(e.receiver) + "." + e.name;
    case ExprKind::ArrayAccess:
        return operand(e.receiver) + "[" + (e.kids.empty() ? std::string("*") : print_expr(*e.kids[0])) + "]";
    case ExprKind::Call: {
        std::string s = e.receiver ? operand(e.receiver) + "." : std::string();
        s += e.name + "(";
        for (std::size_t i = 0; i < e.kids.size(); ++i) s += (i ? ", " : "") + print_expr(*e.kids[i]);
        return s + ")";
    }
    case ExprKind::Unary: return std::string(e.uop == UnOp::Not ? "!" : "-") + operand(e.kids[0]);
    case ExprKind::Binary: return operand(e.kids[0]) + " " + binop_text(e.bop) + " " + operand(e.kids[1]);
    case ExprKind::Cond: return operand(e.kids[0]) + " ? " + operand(e.kids[1]) + " : " + operand(e.kids[2]);
    case ExprKind::Old: return "\\old(" + print_expr(*e.receiver) + ")";
    case ExprKind::InvariantFor: return "\\invariant_for(" + print_expr(*e.receiver) + ")";
    case ExprKind::Fresh: return "\\fresh(" + print_expr(*e.receiver) + ")";
    case ExprKind::NewArray:
        return "new " + std::string(e.decl_type.kind == TypeRef::Kind::IntArray ? "int" : "boolean") + "[" +
               print_expr(*e.kids[0]) + "]";
    case ExprKind::Quant:
        return std::string("(") + (e.forall ? "\\forall " : "\\exists ") + e.decl_type.to_string() + " " + e.name + "; " +
               print_expr(*e.kids[0]) + "; " + print_expr(*e.kids[1]) + ")";
    }
    return "?";
}

std::string print_spec(const TextualSpec& s, int indent) {
    std::ostringstream os;
    os << pad(indent) << "/*@";
    if (!s.visibility.empty()) os << " " << s.visibility;
    if (!s.behavior.empty()) os << " " << s.behavior;
    for (const auto& m : s.modifiers) os << " " << m;
    for (const auto& c : s.clauses) {
        os << "\n" << pad(indent) << "  @ " << keyword_text(c.keyword) << " ";
        if (c.keyword == Keyword::Def) {
            os << c.ident << " = " << c.text;
        } else if (!c.ident.empty()) {
            os << c.ident;
        } else {
            os << c.text;
        }
        os << ";";
    }
    os << "\n" << pad(indent) << "  @*/\n";
    return os.str();
}

std::string print_stmt(const Stmt& s, int indent) {
    std::ostringstream os;
    switch (s.kind) {
    case StmtKind::LocalDecl:
        os << pad(indent) << s.decl_type.to_string() << " " << s.name;
        if (s.value) os << " = " << print_expr(*s.value);
        os << ";\n";
        break;
    case StmtKind::Assign:
        os << pad(indent) << print_expr(*s.target) << " = " << print_expr(*s.value) << ";\n";
        break;
    case StmtKind::ExprStmt:
        os << pad(indent) << print_expr(*s.value) << ";\n";
        break;
    case StmtKind::Return:
        os << pad(indent) << "return";
        if (s.value) os << " " << print_expr(*s.value);
        os << ";\n";
        break;
    case StmtKind::Block:
        os << pad(indent) << "{\n" << print_stmts(s.body, indent + 1) << pad(indent) << "}\n";
        break;
    case StmtKind::If:
        os << pad(indent) << "if (" << print_expr(*s.value) << ") {\n" << print_stmts(s.body, indent + 1) << pad(indent) << "}";
        if (s.has_else) os << " else {\n" << print_stmts(s.else_body, indent + 1) << pad(indent) << "}";
        os << "\n";
        break;
    case StmtKind::While:
        if (s.loop && !s.loop->spec.clauses.empty()) os << print_spec(s.loop->spec, indent);
        os << pad(indent) << "while (" << print_expr(*s.value) << ") {\n"
           << print_stmts(s.body, indent + 1) << pad(indent) << "}\n";
        break;
    }
    return os.str();
}

std::string print_stmts(const std::vector<StmtPtr>& stmts, int indent) {
    std::string out;
    for (const auto& s : stmts) out += print_stmt(*s, indent);
    return out;
}

namespace {
void inline_stmt(const Stmt& s, std::string& out) {
    switch (s.kind) {
    case StmtKind::LocalDecl:
        out += s.decl_type.to_string() + " " + s.name;
        if (s.value) out += " = " + print_expr(*s.value);
        out += ";";
        break;
    case StmtKind::Assign:
        out += print_expr(*s.target) + " = " + print_expr(*s.value) + ";";
        break;
    case StmtKind::ExprStmt:
        out += print_expr(*s.value) + ";";
        break;
    case StmtKind::Return:
        out += "return";
        if (s.value) out += " " + print_expr(*s.value);
        out += ";";
        break;
    case StmtKind::Block:
        out += "{";
        for (const auto& b : s.body) {
            out += " ";
            inline_stmt(*b, out);
        }
        out += " }";
        break;
    case StmtKind::If:
        out += "if (" + print_expr(*s.value) + ") {";
        for (const auto& b : s.body) {
            out += " ";
            inline_stmt(*b, out);
        }
        out += " }";
        if (s.has_else) {
            out += " else {";
            for (const auto& b : s.else_body) {
                out += " ";
                inline_stmt(*b, out);
            }
            out += " }";
        }
        break;
    case StmtKind::While:
        out += "while (" + print_expr(*s.value) + ") {";
        for (const auto& b : s.body) {
            out += " ";
            inline_stmt(*b, out);
        }
        out += " }";
        break;
    }
}
}  // namespace

std::string print_stmts_inline(const std::vector<std::shared_ptr<const Stmt>>& stmts) {
    std::string out;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
        if (i) out += " ";
        inline_stmt(*stmts[i], out);
    }
    return out;
}

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (std::size_t ci = 0; ci < p.classes.size(); ++ci) {
        const ClassDecl& c = p.classes[ci];
        if (ci) os << "\n";
        for (const auto& m : c.modifiers) os << m << " ";
        os << "class " << c.name << " {\n";
        for (const auto& s : c.specs) os << print_spec(s, 1);
        for (const auto& f : c.fields) {
            os << "    " << (f.is_final ? "final " : "") << f.type.to_string() << " " << f.name;
            if (f.constant) os << " = " << *f.constant;
            os << ";\n";
        }
        for (const auto& m : c.methods) {
            os << "\n";
            for (const auto& s : m.specs) os << print_spec(s, 1);
            os << "    ";
            for (const auto& mo : m.modifiers) {
                if (mo != "pure") os << mo << " ";
            }
            if (m.pure) os << "/*@ pure @*/ ";
            os << m.ret.to_string() << " " << m.name << "(";
            for (std::size_t i = 0; i < m.params.size(); ++i)
                os << (i ? ", " : "") << m.params[i].type.to_string() << " " << m.params[i].name;
            os << ") {\n" << print_stmts(m.body, 2) << "    }\n";
        }
        os << "}\n";
    }
    return os.str();
}

}  // namespace abside::surface
