#include "abside/logic/syntax.hpp"

#include <cctype>

namespace abside::logic {

ParseError::ParseError(std::size_t off, const std::string& msg)
    : std::runtime_error("offset " + std::to_string(off) + ": " + msg), offset(off) {}

void Signature::absorb(const Term& t) {
    visit(t, [&](const Term& s) {
        if (s.op() == Op::PVar) {
            program_vars.emplace(s.name(), s.sort());
        } else if (s.op() == Op::Func) {
            FuncDecl d{s.sort(), {}};
            for (const auto& a : s.args()) d.args.push_back(a.sort());
            functions.emplace(s.name(), d);
        } else if (s.op() == Op::UpdApp) {
            for (const auto& l : s->lhs) program_vars.emplace(l.name(), l.sort());
        }
        return true;
    });
}

namespace {

const char* infix(Op op) {
    switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Mod: return "%";
    case Op::Eq: return "=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Imp: return "->";
    case Op::Iff: return "<->";
    case Op::Union: return "\\cup";
    case Op::Intersect: return "\\cap";
    case Op::Setminus: return "\\setminus";
    default: return nullptr;
    }
}

void print(const Term& t, std::string& out);

void print_args(const Term& t, std::string& out) {
    out += "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ", ";
        print(t.args()[i], out);
    }
    out += ")";
}

void print_update(const Term& upd, std::string& out) {
    const Node& n = upd.node();
    out += "{";
    for (std::size_t i = 0; i < n.lhs.size(); ++i) {
        if (i) out += " || ";
        out += n.lhs[i].name() + " := ";
        print(n.args[i], out);
    }
    out += "}";
}

void print(const Term& t, std::string& out) {
    const Node& n = t.node();
    if (const char* op = infix(n.op)) {
        out += "(";
        print(n.args[0], out);
        out += " ";
        out += op;
        out += " ";
        print(n.args[1], out);
        out += ")";
        return;
    }
    switch (n.op) {
    case Op::LVar:
    case Op::PVar:
    case Op::FieldConst:
        out += n.name;
        return;
    case Op::Func:
        out += n.name;
        if (!n.args.empty()) print_args(t, out);
        return;
    case Op::IntLit: out += std::to_string(n.value); return;
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Null: out += "null"; return;
    case Op::Empty: out += "empty"; return;
    case Op::AllLocs: out += "allLocs"; return;
    case Op::Not:
        out += "!";
        print(n.args[0], out);
        return;
    case Op::Neg:
        out += "neg(";
        print(n.args[0], out);
        out += ")";
        return;
    case Op::Ite:
        out += "\\if (";
        print(n.args[0], out);
        out += ") \\then (";
        print(n.args[1], out);
        out += ") \\else (";
        print(n.args[2], out);
        out += ")";
        return;
    case Op::Forall:
    case Op::Exists:
        out += n.op == Op::Forall ? "(\\forall " : "(\\exists ";
        out += n.args[0].sort().to_string() + " " + n.args[0].name() + "; ";
        print(n.args[1], out);
        out += ")";
        return;
    case Op::Select:
        out += "select<" + n.sort.to_string() + ">";
        print_args(t, out);
        return;
    case Op::Store: out += "store"; print_args(t, out); return;
    case Op::Anon: out += "anon"; print_args(t, out); return;
    case Op::Create: out += "create"; print_args(t, out); return;
    case Op::AllFields: out += "allFields"; print_args(t, out); return;
    case Op::Singleton: out += "singleton"; print_args(t, out); return;
    case Op::ElemOf: out += "elementOf"; print_args(t, out); return;
    case Op::Subset: out += "subset"; print_args(t, out); return;
    case Op::Arr: out += "arr"; print_args(t, out); return;
    case Op::UpdApp:
        print_update(t, out);
        print(n.args.back(), out);
        return;
    case Op::Box:
    case Op::Diamond:
        out += n.op == Op::Box ? "\\[" : "\\<";
        out += n.block->text;
        out += n.op == Op::Box ? " \\]" : " \\>";
        print(n.args[0], out);
        return;
    default:
        out += "?";
        return;
    }
}

class Reader {
public:
    Reader(const std::string& s, const Signature& sig) : s_(s), sig_(sig) {}

    Term parse_all() {
        Term t = term();
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return t;
    }

private:
    const std::string& s_;
    const Signature& sig_;
    std::size_t i_ = 0;
    std::vector<Term> bound_;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(i_, msg); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(const std::string& tok) {
        skip();
        return s_.compare(i_, tok.size(), tok) == 0;
    }
    bool accept(const std::string& tok) {
        if (!peek(tok)) return false;
        i_ += tok.size();
        return true;
    }
    void expect(const std::string& tok) {
        if (!accept(tok)) fail("expected '" + tok + "'");
    }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '.' || c == '\'';
    }
    std::string ident() {
        skip();
        if (i_ >= s_.size() || !ident_start(s_[i_])) fail("expected identifier");
        std::size_t j = i_;
        while (j < s_.size() && ident_char(s_[j])) ++j;
        std::string r = s_.substr(i_, j - i_);
        i_ = j;
        return r;
    }
    Sort sort_name() {
        std::string n = ident();
        if (accept("[]")) n += "[]";
        try {
            return Sort::parse(n);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    std::vector<Term> args() {
        expect("(");
        std::vector<Term> r;
        if (accept(")")) return r;
        do {
            r.push_back(term());
        } while (accept(","));
        expect(")");
        return r;
    }
    std::vector<Term> args_n(std::size_t n, const std::string& what) {
        auto a = args();
        if (a.size() != n) fail(what + " expects " + std::to_string(n) + " arguments");
        return a;
    }

    Term binary(const std::string& op, Term a, Term b) {
        try {
            if (op == "+") return add(a, b);
            if (op == "-") return sub(a, b);
            if (op == "*") return mul(a, b);
            if (op == "/") return div_(a, b);
            if (op == "%") return mod_(a, b);
            if (op == "=") return eq(a, b);
            if (op == "<") return lt(a, b);
            if (op == "<=") return le(a, b);
            if (op == "&") return and_(a, b);
            if (op == "|") return or_(a, b);
            if (op == "->") return imp(a, b);
            if (op == "<->") return iff(a, b);
            if (op == "\\cup") return set_union(a, b);
            if (op == "\\cap") return set_intersect(a, b);
            if (op == "\\setminus") return set_minus(a, b);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        fail("unknown operator '" + op + "'");
    }

    std::string binop() {
        skip();
        static const char* ops[] = {"<->", "<=", "->", "\\setminus", "\\cup", "\\cap", "+", "-", "*", "/", "%", "=", "<", "&", "|"};
        for (const char* o : ops) {
            if (accept(o)) return o;
        }
        fail("expected binary operator");
    }

    Term term() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (c == '!') {
            ++i_;
            Term a = term();
            if (!a.sort().is_bool()) fail("negation of a non-formula");
            return not_(a);
        }
        if (c == '{') return update();
        if (c == '\\') {
            if (accept("\\if")) {
                expect("(");
                Term cond = term();
                expect(")");
                expect("\\then");
                expect("(");
                Term a = term();
                expect(")");
                expect("\\else");
                expect("(");
                Term b = term();
                expect(")");
                try {
                    return ite(cond, a, b);
                } catch (const std::invalid_argument& e) {
                    fail(e.what());
                }
            }
            if (peek("\\[") || peek("\\<")) fail("modalities cannot be parsed");
            fail("unknown keyword");
        }
        if (c == '(') {
            ++i_;
            if (accept("\\forall")) return quantifier(true);
            if (accept("\\exists")) return quantifier(false);
            Term a = term();
            std::string op = binop();
            Term b = term();
            expect(")");
            return binary(op, a, b);
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_ + (c == '-' ? 1 : 0);
            if (j >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[j]))) fail("expected number");
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            std::int64_t v = std::stoll(s_.substr(i_, j - i_));
            i_ = j;
            return int_lit(v);
        }
        return named();
    }

    Term quantifier(bool all) {
        Sort s = sort_name();
        std::string name = ident();
        expect(";");
        Term v = lvar(name, s);
        bound_.push_back(v);
        Term body = term();
        bound_.pop_back();
        expect(")");
        if (!body.sort().is_bool()) fail("quantified body is not a formula");
        return all ? forall(v, body) : exists(v, body);
    }

    Term update() {
        expect("{");
        Update u;
        do {
            std::string name = ident();
            auto it = sig_.program_vars.find(name);
            if (it == sig_.program_vars.end()) fail("unknown program variable '" + name + "'");
            expect(":=");
            Term rhs = term();
            u.push_back({pvar(name, it->second), rhs});
        } while (accept("||"));
        expect("}");
        Term target = term();
        return upd_app(u, target);
    }

    Term named() {
        std::string n = ident();
        if (accept("::")) {
            std::string f = ident();
            return field_const(n + "::" + f);
        }
        if (n == "true") return tt();
        if (n == "false") return ff();
        if (n == "null") return null_term();
        if (n == "empty") return empty_set();
        if (n == "allLocs") return all_locs();
        if (n == "length") return field_const("length");
        if (n == "select") {
            expect("<");
            Sort s = sort_name();
            expect(">");
            auto a = args_n(3, "select");
            return select(a[0], a[1], a[2], s);
        }
        if (n == "store") {
            auto a = args_n(4, "store");
            return store(a[0], a[1], a[2], a[3]);
        }
        if (n == "anon") {
            auto a = args_n(3, "anon");
            return anon(a[0], a[1], a[2]);
        }
        if (n == "create") {
            auto a = args_n(2, "create");
            return create(a[0], a[1]);
        }
        if (n == "allFields") return all_fields(args_n(1, "allFields")[0]);
        if (n == "singleton") {
            auto a = args_n(2, "singleton");
            return singleton(a[0], a[1]);
        }
        if (n == "elementOf") {
            auto a = args_n(3, "elementOf");
            return elem_of(a[0], a[1], a[2]);
        }
        if (n == "subset") {
            auto a = args_n(2, "subset");
            return subset(a[0], a[1]);
        }
        try {
            if (n == "arr") return arr(args_n(1, "arr")[0]);
            if (n == "neg") return neg(args_n(1, "neg")[0]);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
            if (it->name() == n) return *it;
        }
        if (peek("(")) {
            auto f = sig_.functions.find(n);
            if (f == sig_.functions.end()) fail("unknown function '" + n + "'");
            auto a = args();
            if (a.size() != f->second.args.size()) fail("arity mismatch for '" + n + "'");
            return func(n, f->second.result, a);
        }
        if (auto p = sig_.program_vars.find(n); p != sig_.program_vars.end()) return pvar(n, p->second);
        if (auto f = sig_.functions.find(n); f != sig_.functions.end()) {
            if (!f->second.args.empty()) fail("missing arguments for '" + n + "'");
            return func(n, f->second.result);
        }
        fail("unknown symbol '" + n + "'");
    }
};

}  // namespace

std::string to_string(const Term& t) {
    std::string out;
    print(t, out);
    return out;
}

std::string to_string(const Update& u) {
    std::string out = "{";
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) out += " || ";
        out += u[i].lhs.name() + " := ";
        print(u[i].rhs, out);
    }
    return out + "}";
}

Term parse_term(const std::string& text, const Signature& sig) { return Reader(text, sig).parse_all(); }

}  // namespace abside::logic
