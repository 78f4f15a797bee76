#include "abside/surface/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace abside::surface {

SyntaxError::SyntaxError(SourcePos p, const std::string& msg)
    : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg), pos(p) {}

namespace {

enum class Tok { Ident, Int, Punct, Backslash, Annotation, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

// Multi-character operators, longest first.
const char* const kOps[] = {"<==>", "<=!=>", "==>", "<==", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
                             "+=",   "-=",    "::"};

class Lexer {
public:
    Lexer(const std::string& src, SourcePos base) : src_(src), line_(base.line ? base.line : 1), col_(base.col ? base.col : 1) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (i_ >= src_.size()) {
                out.push_back({Tok::End, "", here()});
                return out;
            }
            SourcePos p = here();
            char c = src_[i_];
            if (c == '/' && peek(1) == '/') {
                if (peek(2) == '@') {
                    std::size_t end = src_.find('\n', i_);
                    if (end == std::string::npos) end = src_.size();
                    std::string body = src_.substr(i_ + 2, end - i_ - 2);
                    advance(end - i_);
                    out.push_back({Tok::Annotation, body, p});
                } else {
                    while (i_ < src_.size() && src_[i_] != '\n') advance(1);
                }
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                bool annot = peek(2) == '@';
                std::size_t end = src_.find("*/", i_ + 2);
                if (end == std::string::npos) throw SyntaxError(p, "unterminated comment");
                std::string body = src_.substr(i_ + 2, end - i_ - 2);
                advance(end + 2 - i_);
                if (annot) {
                    if (!body.empty() && body.back() == '@') body.pop_back();
                    out.push_back({Tok::Annotation, body, p});
                }
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i_;
                while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
                out.push_back({Tok::Ident, src_.substr(i_, j - i_), p});
                advance(j - i_);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i_;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
                out.push_back({Tok::Int, src_.substr(i_, j - i_), p});
                advance(j - i_);
                continue;
            }
            if (c == '\\') {
                std::size_t j = i_ + 1;
                while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
                if (j == i_ + 1) throw SyntaxError(p, "stray backslash");
                out.push_back({Tok::Backslash, src_.substr(i_, j - i_), p});
                advance(j - i_);
                continue;
            }
            bool matched = false;
            for (const char* op : kOps) {
                std::string s(op);
                if (src_.compare(i_, s.size(), s) == 0) {
                    out.push_back({Tok::Punct, s, p});
                    advance(s.size());
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string("(){}[];,.=<>+-*/%!?:&|").find(c) != std::string::npos) {
                out.push_back({Tok::Punct, std::string(1, c), p});
                advance(1);
                continue;
            }
            throw SyntaxError(p, std::string("unexpected character '") + c + "'");
        }
    }

private:
    char peek(std::size_t k) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }
    SourcePos here() const { return {line_, col_}; }
    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
            if (src_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }
    void skip_space() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
    }

    const std::string& src_;
    std::size_t i_ = 0;
    int line_;
    int col_;
};

const std::set<std::string> kModifiers = {"public", "private", "protected", "final", "static", "spec_public", "pure", "helper"};
const std::set<std::string> kAnnotModifiers = {"public", "private", "protected", "spec_public", "pure", "helper", "instance"};

ExprPtr mk(ExprKind k, SourcePos p) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->pos = p;
    return e;
}

StmtPtr mks(StmtKind k, SourcePos p) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->pos = p;
    return s;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    // ---- token helpers -------------------------------------------------

    const Token& cur() const { return t_[i_]; }
    const Token& la(std::size_t k) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
    bool at(const char* p) const { return (cur().kind == Tok::Punct || cur().kind == Tok::Ident) && cur().text == p; }
    bool at_punct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }
    bool at_end() const { return cur().kind == Tok::End; }
    Token take() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }
    bool accept(const char* p) {
        if (at(p)) {
            ++i_;
            return true;
        }
        return false;
    }
    Token expect(const char* p) {
        if (!at(p)) fail(std::string("expected '") + p + "' but found '" + describe(cur()) + "'");
        return take();
    }
    std::string expect_ident() {
        if (cur().kind != Tok::Ident) fail("expected identifier but found '" + describe(cur()) + "'");
        return take().text;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(cur().pos, msg); }
    static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

    // ---- program ---------------------------------------------------------

    Program program() {
        Program prog;
        while (!at_end()) {
            std::vector<TextualSpec> pending = annotations();
            std::vector<std::string> mods = modifiers(pending);
            SourcePos p = cur().pos;
            expect("class");
            ClassDecl c;
            c.pos = p;
            c.modifiers = mods;
            c.name = expect_ident();
            if (prog.find_class(c.name)) throw SyntaxError(p, "duplicate class '" + c.name + "'");
            for (auto& s : pending) attach_class_level(c, s, p);
            expect("{");
            class_body(c);
            expect("}");
            prog.classes.push_back(std::move(c));
        }
        return prog;
    }

    std::vector<TextualSpec> annotations() {
        std::vector<TextualSpec> out;
        while (cur().kind == Tok::Annotation) {
            Token a = take();
            for (auto& s : parse_annotations(a.text, a.pos)) out.push_back(std::move(s));
        }
        return out;
    }

    // Modifiers may interleave with modifier-only annotations such as /*@ pure @*/.
    std::vector<std::string> modifiers(std::vector<TextualSpec>& pending) {
        std::vector<std::string> mods;
        while (true) {
            if (cur().kind == Tok::Ident && kModifiers.count(cur().text)) {
                mods.push_back(take().text);
            } else if (cur().kind == Tok::Annotation) {
                for (auto& s : annotations()) pending.push_back(std::move(s));
            } else {
                return mods;
            }
        }
    }

    static bool is_modifier_only(const TextualSpec& s) {
        return s.kind == TextualSpec::Kind::Contract && s.clauses.empty() && s.behavior.empty();
    }

    void attach_class_level(ClassDecl& c, TextualSpec& s, SourcePos p) {
        if (s.kind == TextualSpec::Kind::Contract) {
            if (is_modifier_only(s)) return;
            throw SyntaxError(s.pos.line ? s.pos : p, "method contract not adjacent to a method declaration");
        }
        if (s.kind == TextualSpec::Kind::LoopSpec)
            throw SyntaxError(s.pos.line ? s.pos : p, "loop annotation not adjacent to a loop");
        c.specs.push_back(std::move(s));
    }

    void class_body(ClassDecl& c) {
        while (!at("}") && !at_end()) {
            std::vector<TextualSpec> pending = annotations();
            if (at("}")) {
                for (auto& s : pending) attach_class_level(c, s, cur().pos);
                break;
            }
            std::vector<std::string> mods = modifiers(pending);
            SourcePos p = cur().pos;
            TypeRef type = type_ref(true);
            // Annotations such as /*@ pure @*/ may sit between type and name.
            for (auto& s : annotations()) pending.push_back(std::move(s));
            std::string name = expect_ident();
            if (at("(")) {
                MethodDecl m;
                m.pos = p;
                m.name = name;
                m.cls = c.name;
                m.ret = type;
                m.modifiers = mods;
                for (auto& mo : mods)
                    if (mo == "pure") m.pure = true;
                for (auto& s : pending) {
                    for (auto& mo : s.modifiers)
                        if (mo == "pure") m.pure = true;
                    if (s.kind == TextualSpec::Kind::Contract) {
                        if (!is_modifier_only(s)) m.specs.push_back(std::move(s));
                    } else {
                        attach_class_level(c, s, p);
                    }
                }
                if (c.find_method(name)) throw SyntaxError(p, "duplicate method '" + name + "' in class " + c.name);
                expect("(");
                if (!at(")")) {
                    do {
                        Param prm;
                        prm.type = type_ref(false);
                        prm.name = expect_ident();
                        for (auto& q : m.params)
                            if (q.name == prm.name) fail("duplicate parameter '" + prm.name + "'");
                        m.params.push_back(prm);
                    } while (accept(","));
                }
                expect(")");
                expect("{");
                m.body = stmts_until_brace();
                expect("}");
                c.methods.push_back(std::move(m));
            } else {
                if (type.kind == TypeRef::Kind::Void) throw SyntaxError(p, "field of type void");
                FieldDecl f;
                f.pos = p;
                f.name = name;
                f.type = type;
                for (auto& mo : mods)
                    if (mo == "final") f.is_final = true;
                for (auto& s : pending) attach_class_level(c, s, p);
                if (accept("=")) {
                    if (!f.is_final || f.type.kind != TypeRef::Kind::Int)
                        throw SyntaxError(p, "only final int fields may carry an initializer");
                    bool negative = accept("-");
                    if (cur().kind != Tok::Int) fail("field initializer must be an integer literal");
                    std::int64_t v = std::stoll(take().text);
                    f.constant = negative ? -v : v;
                } else if (f.is_final) {
                    throw SyntaxError(p, "final field '" + name + "' needs a literal initializer");
                }
                expect(";");
                if (c.find_field(name)) throw SyntaxError(p, "duplicate field '" + name + "' in class " + c.name);
                c.fields.push_back(std::move(f));
            }
        }
    }

    TypeRef type_ref(bool allow_void) {
        SourcePos p = cur().pos;
        std::string n = expect_ident();
        TypeRef t;
        if (n == "void") {
            if (!allow_void) throw SyntaxError(p, "void is not a value type");
            return TypeRef::void_();
        }
        if (n == "int") {
            t = TypeRef::int_();
        } else if (n == "boolean") {
            t = TypeRef::bool_();
        } else {
            t = TypeRef::class_(n);
        }
        if (at_punct("[") && la(1).kind == Tok::Punct && la(1).text == "]") {
            take();
            take();
            if (t.kind == TypeRef::Kind::Int) {
                t = {TypeRef::Kind::IntArray, {}};
            } else if (t.kind == TypeRef::Kind::Bool) {
                t = {TypeRef::Kind::BoolArray, {}};
            } else {
                throw SyntaxError(p, "only int[] and boolean[] arrays are supported");
            }
        }
        return t;
    }

    // ---- statements ------------------------------------------------------

    std::vector<StmtPtr> stmts_until_brace() {
        std::vector<StmtPtr> out;
        while (!at("}") && !at_end()) {
            for (auto& s : statement()) out.push_back(s);
        }
        return out;
    }

    // Block contents, flattening an enclosing brace pair.
    std::vector<StmtPtr> branch() {
        if (accept("{")) {
            auto b = stmts_until_brace();
            expect("}");
            return b;
        }
        return statement();
    }

    bool looks_like_decl() const {
        if (cur().kind != Tok::Ident) return false;
        const std::string& n = cur().text;
        if (n == "int" || n == "boolean") return true;
        if (n == "return" || n == "if" || n == "while" || n == "for" || n == "this") return false;
        if (la(1).kind == Tok::Ident) return true;
        return la(1).kind == Tok::Punct && la(1).text == "[" && la(2).kind == Tok::Punct && la(2).text == "]";
    }

    std::vector<StmtPtr> statement() {
        std::vector<TextualSpec> pending = annotations();
        SourcePos p = cur().pos;
        if (at("while") || at("for")) return loop(pending);
        for (auto& s : pending) {
            if (!is_modifier_only(s)) throw SyntaxError(s.pos.line ? s.pos : p, "annotation not adjacent to a declaration or loop");
        }
        if (accept("{")) {
            auto b = mks(StmtKind::Block, p);
            b->body = stmts_until_brace();
            expect("}");
            return {b};
        }
        if (accept(";")) return {};
        if (accept("if")) {
            auto s = mks(StmtKind::If, p);
            expect("(");
            s->value = expression();
            expect(")");
            s->body = branch();
            if (accept("else")) {
                s->has_else = true;
                s->else_body = branch();
            }
            return {s};
        }
        if (accept("return")) {
            auto s = mks(StmtKind::Return, p);
            if (!at(";")) s->value = expression();
            expect(";");
            return {s};
        }
        if (looks_like_decl()) {
            auto s = mks(StmtKind::LocalDecl, p);
            s->decl_type = type_ref(false);
            s->name = expect_ident();
            if (accept("=")) s->value = expression();
            expect(";");
            return {s};
        }
        auto s = simple_statement();
        expect(";");
        return {s};
    }

    // Assignment, compound assignment, increment, or call, without the semicolon.
    StmtPtr simple_statement() {
        SourcePos p = cur().pos;
        ExprPtr lhs = postfix();
        if (at_punct("=") || at_punct("+=") || at_punct("-=") || at_punct("++") || at_punct("--")) {
            std::string op = take().text;
            if (lhs->kind != ExprKind::Name && lhs->kind != ExprKind::FieldAccess && lhs->kind != ExprKind::ArrayAccess)
                throw SyntaxError(p, "left side of assignment is not assignable");
            auto s = mks(StmtKind::Assign, p);
            s->target = lhs;
            if (op == "=") {
                s->value = expression();
            } else {
                auto b = mk(ExprKind::Binary, p);
                b->bop = (op == "+=" || op == "++") ? BinOp::Add : BinOp::Sub;
                b->kids.push_back(clone(lhs));
                if (op == "++" || op == "--") {
                    auto one = mk(ExprKind::IntLit, p);
                    one->ival = 1;
                    b->kids.push_back(one);
                } else {
                    b->kids.push_back(expression());
                }
                s->value = b;
            }
            return s;
        }
        if (lhs->kind != ExprKind::Call) throw SyntaxError(p, "expression statement must be a method call");
        auto s = mks(StmtKind::ExprStmt, p);
        s->value = lhs;
        return s;
    }

    std::vector<StmtPtr> loop(std::vector<TextualSpec>& pending) {
        SourcePos p = cur().pos;
        auto spec = std::make_shared<LoopSpec>();
        spec->spec.kind = TextualSpec::Kind::LoopSpec;
        spec->spec.pos = p;
        for (auto& s : pending) {
            if (is_modifier_only(s)) continue;
            if (s.kind != TextualSpec::Kind::LoopSpec) throw SyntaxError(s.pos.line ? s.pos : p, "only loop annotations may precede a loop");
            for (auto& cl : s.clauses) spec->spec.clauses.push_back(cl);
            spec->spec.pos = s.pos;
        }
        auto w = mks(StmtKind::While, p);
        w->loop = spec;
        if (accept("while")) {
            expect("(");
            w->value = expression();
            expect(")");
            w->body = branch();
            return {w};
        }
        expect("for");
        expect("(");
        std::vector<StmtPtr> init;
        if (!at(";")) {
            if (looks_like_decl()) {
                auto d = mks(StmtKind::LocalDecl, cur().pos);
                d->decl_type = type_ref(false);
                d->name = expect_ident();
                if (accept("=")) d->value = expression();
                init.push_back(d);
            } else {
                init.push_back(simple_statement());
            }
        }
        expect(";");
        if (at(";")) {
            auto t = mk(ExprKind::BoolLit, cur().pos);
            t->bval = true;
            w->value = t;
        } else {
            w->value = expression();
        }
        expect(";");
        StmtPtr step;
        if (!at(")")) step = simple_statement();
        expect(")");
        w->body = branch();
        if (step) w->body.push_back(step);
        init.push_back(w);
        return init;
    }

    // ---- expressions -----------------------------------------------------

    ExprPtr expression() { return ternary(); }

    ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b, SourcePos p) {
        auto e = mk(ExprKind::Binary, p);
        e->bop = op;
        e->kids = {std::move(a), std::move(b)};
        return e;
    }

    ExprPtr ternary() {
        SourcePos p = cur().pos;
        ExprPtr c = equivalence();
        if (accept("?")) {
            ExprPtr a = expression();
            expect(":");
            ExprPtr b = ternary();
            auto e = mk(ExprKind::Cond, p);
            e->kids = {c, a, b};
            return e;
        }
        return c;
    }

    ExprPtr equivalence() {
        SourcePos p = cur().pos;
        ExprPtr a = implication();
        while (at_punct("<==>")) {
            take();
            a = binary(BinOp::Equiv, a, implication(), p);
        }
        return a;
    }

    ExprPtr implication() {
        SourcePos p = cur().pos;
        ExprPtr a = disjunction();
        if (at_punct("==>")) {
            take();
            return binary(BinOp::Implies, a, implication(), p);
        }
        return a;
    }

    ExprPtr disjunction() {
        SourcePos p = cur().pos;
        ExprPtr a = conjunction();
        while (at_punct("||")) {
            take();
            a = binary(BinOp::Or, a, conjunction(), p);
        }
        return a;
    }

    ExprPtr conjunction() {
        SourcePos p = cur().pos;
        ExprPtr a = equality();
        while (at_punct("&&")) {
            take();
            a = binary(BinOp::And, a, equality(), p);
        }
        return a;
    }

    ExprPtr equality() {
        SourcePos p = cur().pos;
        ExprPtr a = relation();
        while (at_punct("==") || at_punct("!=")) {
            BinOp op = take().text == "==" ? BinOp::Eq : BinOp::Ne;
            a = binary(op, a, relation(), p);
        }
        return a;
    }

    ExprPtr relation() {
        SourcePos p = cur().pos;
        ExprPtr a = additive();
        while (at_punct("<") || at_punct("<=") || at_punct(">") || at_punct(">=")) {
            std::string s = take().text;
            BinOp op = s == "<" ? BinOp::Lt : s == "<=" ? BinOp::Le : s == ">" ? BinOp::Gt : BinOp::Ge;
            a = binary(op, a, additive(), p);
        }
        return a;
    }

    ExprPtr additive() {
        SourcePos p = cur().pos;
        ExprPtr a = multiplicative();
        while (at_punct("+") || at_punct("-")) {
            BinOp op = take().text == "+" ? BinOp::Add : BinOp::Sub;
            a = binary(op, a, multiplicative(), p);
        }
        return a;
    }

    ExprPtr multiplicative() {
        SourcePos p = cur().pos;
        ExprPtr a = unary();
        while (at_punct("*") || at_punct("/") || at_punct("%")) {
            std::string s = take().text;
            BinOp op = s == "*" ? BinOp::Mul : s == "/" ? BinOp::Div : BinOp::Mod;
            a = binary(op, a, unary(), p);
        }
        return a;
    }

    ExprPtr unary() {
        SourcePos p = cur().pos;
        if (at_punct("!") || at_punct("-")) {
            auto e = mk(ExprKind::Unary, p);
            e->uop = take().text == "!" ? UnOp::Not : UnOp::Neg;
            e->kids.push_back(unary());
            return e;
        }
        return postfix();
    }

    std::vector<ExprPtr> call_args() {
        std::vector<ExprPtr> args;
        expect("(");
        if (!at(")")) {
            do {
                args.push_back(expression());
            } while (accept(","));
        }
        expect(")");
        return args;
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        while (true) {
            SourcePos p = cur().pos;
            if (at_punct(".")) {
                take();
                std::string n = expect_ident();
                if (at("(")) {
                    auto c = mk(ExprKind::Call, p);
                    c->name = n;
                    c->receiver = e;
                    c->kids = call_args();
                    e = c;
                } else {
                    auto f = mk(ExprKind::FieldAccess, p);
                    f->name = n;
                    f->receiver = e;
                    e = f;
                }
            } else if (at_punct("[")) {
                take();
                auto a = mk(ExprKind::ArrayAccess, p);
                a->receiver = e;
                if (!accept("*")) a->kids.push_back(expression());
                expect("]");
                e = a;
            } else {
                return e;
            }
        }
    }

    ExprPtr primary() {
        SourcePos p = cur().pos;
        const Token& t = cur();
        if (t.kind == Tok::Int) {
            auto e = mk(ExprKind::IntLit, p);
            try {
                e->ival = std::stoll(take().text);
            } catch (const std::out_of_range&) {
                throw SyntaxError(p, "integer literal out of range");
            }
            return e;
        }
        if (t.kind == Tok::Backslash) {
            std::string k = take().text;
            if (k == "\\result") return mk(ExprKind::Result, p);
            if (k == "\\nothing") return mk(ExprKind::Nothing, p);
            if (k == "\\everything") return mk(ExprKind::Everything, p);
            if (k == "\\old" || k == "\\invariant_for" || k == "\\fresh") {
                auto e = mk(k == "\\old" ? ExprKind::Old : k == "\\fresh" ? ExprKind::Fresh : ExprKind::InvariantFor, p);
                expect("(");
                e->receiver = expression();
                expect(")");
                return e;
            }
            if (k == "\\forall" || k == "\\exists") return quantifier(k == "\\forall", p);
            throw SyntaxError(p, "unknown JML keyword '" + k + "'");
        }
        if (t.kind == Tok::Punct && t.text == "(") {
            take();
            if (cur().kind == Tok::Backslash && (cur().text == "\\forall" || cur().text == "\\exists")) {
                bool fa = take().text == "\\forall";
                ExprPtr q = quantifier(fa, p);
                expect(")");
                return q;
            }
            ExprPtr e = expression();
            expect(")");
            return e;
        }
        if (t.kind == Tok::Ident) {
            std::string n = take().text;
            if (n == "true" || n == "false") {
                auto e = mk(ExprKind::BoolLit, p);
                e->bval = n == "true";
                return e;
            }
            if (n == "null") return mk(ExprKind::Null, p);
            if (n == "this") return mk(ExprKind::This, p);
            if (n == "invariant_for") {
                auto e = mk(ExprKind::InvariantFor, p);
                expect("(");
                e->receiver = expression();
                expect(")");
                return e;
            }
            if (n == "new") {
                auto e = mk(ExprKind::NewArray, p);
                std::string el = expect_ident();
                if (el == "int") {
                    e->decl_type = {TypeRef::Kind::IntArray, {}};
                } else if (el == "boolean") {
                    e->decl_type = {TypeRef::Kind::BoolArray, {}};
                } else {
                    throw SyntaxError(p, "only int and boolean arrays can be allocated");
                }
                expect("[");
                e->kids.push_back(expression());
                expect("]");
                return e;
            }
            if (at("(")) {
                auto c = mk(ExprKind::Call, p);
                c->name = n;
                c->kids = call_args();
                return c;
            }
            auto e = mk(ExprKind::Name, p);
            e->name = n;
            return e;
        }
        fail("unexpected '" + describe(t) + "' in expression");
    }

    // After the \forall / \exists keyword: `T x; guard; body` or `T x; body`.
    ExprPtr quantifier(bool fa, SourcePos p) {
        auto q = mk(ExprKind::Quant, p);
        q->forall = fa;
        q->decl_type = type_ref(false);
        q->name = expect_ident();
        expect(";");
        ExprPtr first = expression();
        if (accept(";")) {
            q->kids = {first, expression()};
        } else {
            auto t = mk(ExprKind::BoolLit, p);
            t->bval = true;
            q->kids = {t, first};
        }
        return q;
    }

    std::vector<ExprPtr> store_refs() {
        std::vector<ExprPtr> out;
        do {
            out.push_back(expression());
        } while (accept(","));
        return out;
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
};

// Strips comment markers: leading '@'s per line and a trailing "@" run.
std::string strip_markers(const std::string& comment) {
    std::string out;
    std::size_t i = 0;
    bool line_start = true;
    while (i < comment.size()) {
        char c = comment[i];
        if (line_start) {
            if (c == ' ' || c == '\t') {
                out += c;
                ++i;
                continue;
            }
            if (c == '@') {
                out += ' ';
                ++i;
                continue;
            }
            line_start = false;
        }
        if (c == '\n') line_start = true;
        out += c;
        ++i;
    }
    return out;
}

}  // namespace

Program parse_program(const std::string& source) {
    Lexer lx(source, {1, 1});
    Parser p(lx.run());
    return p.program();
}

ExprPtr parse_expression(const std::string& text, SourcePos base) {
    Lexer lx(text, base);
    Parser p(lx.run());
    ExprPtr e = p.expression();
    if (!p.at_end()) p.fail("trailing input after expression");
    return e;
}

std::vector<ExprPtr> parse_store_refs(const std::string& text, SourcePos base) {
    Lexer lx(text, base);
    Parser p(lx.run());
    auto refs = p.store_refs();
    if (!p.at_end()) p.fail("trailing input after store-ref list");
    return refs;
}

std::vector<StmtPtr> parse_statements(const std::string& text) {
    Lexer lx(text, {1, 1});
    Parser p(lx.run());
    std::vector<StmtPtr> out;
    while (!p.at_end()) {
        for (auto& s : p.statement()) out.push_back(s);
    }
    return out;
}

std::vector<TextualSpec> parse_annotations(const std::string& comment, SourcePos pos) {
    std::string text = strip_markers(comment);
    std::vector<TextualSpec> out;
    TextualSpec contract;
    contract.kind = TextualSpec::Kind::Contract;
    contract.pos = pos;
    std::vector<TextualSpec> contracts;
    std::vector<TextualSpec> extras;  // invariants, abstract invariants, defs
    TextualSpec loop;
    loop.kind = TextualSpec::Kind::LoopSpec;
    loop.pos = pos;
    bool has_loop_kw = false;
    bool has_contract_kw = false;
    std::vector<std::string> pending_mods;
    std::string pending_vis;

    // Position tracking relative to the comment start.
    auto pos_at = [&](std::size_t off) {
        SourcePos p = pos;
        for (std::size_t k = 0; k < off && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++p.line;
                p.col = 1;
            } else {
                ++p.col;
            }
        }
        return p;
    };

    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto word = [&] {
        std::size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
        std::string w = text.substr(i, j - i);
        i = j;
        return w;
    };
    // Clause body up to the ';' at parenthesis depth 0.
    auto body = [&](SourcePos kwpos) {
        int depth = 0;
        std::size_t j = i;
        for (; j < text.size(); ++j) {
            char c = text[j];
            if (c == '(' || c == '[' || c == '{') ++depth;
            if (c == ')' || c == ']' || c == '}') --depth;
            if (c == ';' && depth == 0) break;
        }
        if (j >= text.size()) throw SyntaxError(kwpos, "missing ';' after annotation clause");
        std::string b = text.substr(i, j - i);
        i = j + 1;
        std::size_t a = b.find_first_not_of(" \t\r\n");
        std::size_t z = b.find_last_not_of(" \t\r\n");
        return a == std::string::npos ? std::string() : b.substr(a, z - a + 1);
    };
    auto check_ident = [](const std::string& s) {
        if (s.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        return true;
    };

    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        std::size_t start = i;
        SourcePos kwpos = pos_at(start);
        if (!std::isalpha(static_cast<unsigned char>(text[i])) && text[i] != '_')
            throw SyntaxError(kwpos, std::string("unexpected '") + text[i] + "' in annotation");
        std::string w = word();
        if (w == "also") {
            contracts.push_back(contract);
            contract = TextualSpec{};
            contract.kind = TextualSpec::Kind::Contract;
            contract.pos = kwpos;
            continue;
        }
        if (w == "normal_behavior" || w == "normal_behaviour") {
            contract.behavior = "normal_behavior";
            if (!pending_vis.empty()) contract.visibility = pending_vis;
            has_contract_kw = true;
            continue;
        }
        if (kAnnotModifiers.count(w)) {
            if (w == "public" || w == "private" || w == "protected") {
                pending_vis = w;
            } else {
                pending_mods.push_back(w);
            }
            continue;
        }
        auto kw = keyword_from_text(w);
        if (!kw) throw SyntaxError(kwpos, "unknown annotation keyword '" + w + "'");
        Clause cl;
        cl.keyword = *kw;
        cl.pos = kwpos;
        switch (*kw) {
        case Keyword::RequiresAbs:
        case Keyword::EnsuresAbs:
        case Keyword::AssignableAbs:
        case Keyword::InvariantAbs: {
            std::string b = body(kwpos);
            if (!check_ident(b)) throw SyntaxError(kwpos, std::string(keyword_text(*kw)) + " expects exactly one identifier");
            cl.ident = b;
            break;
        }
        case Keyword::Def: {
            std::string b = body(kwpos);
            std::size_t eqp = b.find('=');
            if (eqp == std::string::npos) throw SyntaxError(kwpos, "def clause without '='");
            std::string lhs = b.substr(0, eqp);
            std::string rhs = b.substr(eqp + 1);
            auto trim = [](std::string s) {
                std::size_t a = s.find_first_not_of(" \t\r\n");
                std::size_t z = s.find_last_not_of(" \t\r\n");
                return a == std::string::npos ? std::string() : s.substr(a, z - a + 1);
            };
            lhs = trim(lhs);
            rhs = trim(rhs);
            if (!check_ident(lhs)) throw SyntaxError(kwpos, "def clause needs exactly one identifier left of '='");
            if (rhs.empty()) throw SyntaxError(kwpos, "def clause without definition");
            cl.ident = lhs;
            cl.text = rhs;
            break;
        }
        default: {
            std::string b = body(kwpos);
            if (b.empty()) throw SyntaxError(kwpos, std::string("missing expression after ") + keyword_text(*kw));
            cl.text = b;
            break;
        }
        }
        switch (*kw) {
        case Keyword::Invariant: {
            TextualSpec s;
            s.kind = TextualSpec::Kind::Invariant;
            s.visibility = pending_vis;
            s.pos = kwpos;
            s.clauses.push_back(cl);
            extras.push_back(std::move(s));
            pending_vis.clear();
            break;
        }
        case Keyword::InvariantAbs: {
            TextualSpec s;
            s.kind = TextualSpec::Kind::AbstractInvariant;
            s.visibility = pending_vis;
            s.pos = kwpos;
            s.clauses.push_back(cl);
            extras.push_back(std::move(s));
            pending_vis.clear();
            break;
        }
        case Keyword::Def: {
            TextualSpec s;
            s.kind = TextualSpec::Kind::Def;
            s.pos = kwpos;
            s.clauses.push_back(cl);
            extras.push_back(std::move(s));
            break;
        }
        case Keyword::LoopInvariant:
        case Keyword::Decreases:
            has_loop_kw = true;
            loop.clauses.push_back(cl);
            break;
        default:
            has_contract_kw = true;
            contract.clauses.push_back(cl);
            break;
        }
    }

    if (has_loop_kw) {
        // assignable clauses in a loop annotation belong to the loop.
        for (auto& cl : contract.clauses) {
            if (cl.keyword != Keyword::Assignable) throw SyntaxError(cl.pos, "contract clause inside a loop annotation");
            loop.clauses.push_back(cl);
        }
        if (!contracts.empty()) throw SyntaxError(pos, "'also' inside a loop annotation");
        // Restore source order of the loop clauses.
        std::stable_sort(loop.clauses.begin(), loop.clauses.end(), [](const Clause& a, const Clause& b) {
            return a.pos.line != b.pos.line ? a.pos.line < b.pos.line : a.pos.col < b.pos.col;
        });
        out.push_back(loop);
    } else {
        contracts.push_back(contract);
        for (auto& c : contracts) {
            if (c.clauses.empty() && c.behavior.empty() && has_contract_kw && contracts.size() > 1)
                throw SyntaxError(c.pos, "empty contract case");
            if (!c.clauses.empty() || !c.behavior.empty()) {
                if (c.visibility.empty()) c.visibility = pending_vis;
                out.push_back(c);
            }
        }
        if (out.empty() && !pending_mods.empty()) {
            TextualSpec m;
            m.kind = TextualSpec::Kind::Contract;
            m.pos = pos;
            out.push_back(m);
        }
    }
    if (!pending_mods.empty() && !out.empty() && out.front().kind == TextualSpec::Kind::Contract)
        out.front().modifiers = pending_mods;
    for (auto& e : extras) out.push_back(std::move(e));
    return out;
}

}  // namespace abside::surface
