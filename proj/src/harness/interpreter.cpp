#include "abside/harness/interpreter.hpp"

#include <optional>
#include <stdexcept>

#include "abside/logic/simplify.hpp"

namespace abside::harness {

using logic::FieldKey;
using logic::Loc;
using logic::ObjId;
using logic::Value;
using surface::BinOp;
using surface::Expr;
using surface::ExprKind;
using surface::NameKind;
using surface::Stmt;
using surface::StmtKind;
using surface::TypeRef;

namespace {

struct Fault {
    std::string what;
};
struct OutOfSteps {};

Value zero_of(const TypeRef& t) {
    switch (t.kind) {
    case TypeRef::Kind::Int: return Value::integer(0);
    case TypeRef::Kind::Bool: return Value::boolean(false);
    default: return Value::ref(0);
    }
}

FieldKey field_key(const std::string& owner, const std::string& name) { return FieldKey::named(owner + "::" + name); }

const FieldKey kLength = FieldKey::named("length");
const FieldKey kCreated = FieldKey::named("Object::created");

struct Frame {
    ObjId self = 0;
    std::map<std::string, Value> locals;
    std::optional<Value> ret;
};

class Machine {
public:
    Machine(const surface::Program& p, long budget, ExecState& st, std::set<Loc>& writes, std::set<Loc>* reads)
        : p_(p), budget_(budget), st_(st), writes_(writes), reads_(reads) {}

    Value call(const std::string& cls, const std::string& method, ObjId self, const std::vector<Value>& args) {
        const surface::ClassDecl* c = p_.find_class(cls);
        const surface::MethodDecl* m = c ? c->find_method(method) : nullptr;
        if (!m) throw std::invalid_argument("unknown method " + cls + "." + method);
        if (args.size() != m->params.size()) throw std::invalid_argument("wrong argument count for " + cls + "." + method);
        tick();
        Frame f;
        f.self = self;
        for (std::size_t i = 0; i < args.size(); ++i) f.locals[m->params[i].name] = args[i];
        exec_block(m->body, f);
        return f.ret ? *f.ret : zero_of(m->ret);
    }

private:
    void tick() {
        if (++steps_ > budget_) throw OutOfSteps{};
    }

    Value read(ObjId o, const FieldKey& k, const Value& zero) const {
        if (o == 0) throw Fault{"null dereference"};
        Loc l{o, k};
        if (reads_ && !writes_.count(l)) reads_->insert(l);
        auto it = st_.heap.find(l);
        return it == st_.heap.end() ? zero : it->second;
    }

    void write(ObjId o, const FieldKey& k, Value v) {
        if (o == 0) throw Fault{"null dereference"};
        Loc l{o, k};
        st_.heap[l] = std::move(v);
        writes_.insert(std::move(l));
    }

    std::int64_t checked_index(ObjId arr, std::int64_t i) const {
        std::int64_t len = read(arr, kLength, Value::integer(0)).i;
        if (i < 0 || i >= len) throw Fault{"index " + std::to_string(i) + " out of bounds"};
        return i;
    }

    Value eval(const Expr& e, Frame& f) {
        switch (e.kind) {
        case ExprKind::IntLit: return Value::integer(e.ival);
        case ExprKind::BoolLit: return Value::boolean(e.bval);
        case ExprKind::Null: return Value::ref(0);
        case ExprKind::This: return Value::ref(f.self);
        case ExprKind::Name:
            switch (e.name_kind) {
            case NameKind::Constant: return Value::integer(e.ival);
            case NameKind::Field: return read(f.self, field_key(e.owner, e.name), zero_of(e.type));
            default: {
                auto it = f.locals.find(e.name);
                return it == f.locals.end() ? zero_of(e.type) : it->second;
            }
            }
        case ExprKind::FieldAccess: {
            if (e.name_kind == NameKind::Constant) return Value::integer(e.ival);
            ObjId o = eval(*e.receiver, f).i;
            if (e.is_length) return read(o, kLength, Value::integer(0));
            return read(o, field_key(e.owner, e.name), zero_of(e.type));
        }
        case ExprKind::ArrayAccess: {
            ObjId a = eval(*e.receiver, f).i;
            std::int64_t i = eval(*e.kids.at(0), f).i;
            if (a == 0) throw Fault{"null dereference"};
            return read(a, FieldKey::slot(checked_index(a, i)), zero_of(e.type));
        }
        case ExprKind::Call: {
            ObjId recv = e.receiver ? eval(*e.receiver, f).i : f.self;
            std::vector<Value> args;
            for (const auto& k : e.kids) args.push_back(eval(*k, f));
            if (recv == 0) throw Fault{"call on null"};
            return call(e.owner, e.name, recv, args);
        }
        case ExprKind::Unary: {
            Value v = eval(*e.kids.at(0), f);
            return e.uop == surface::UnOp::Not ? Value::boolean(!v.truth()) : Value::integer(-v.i);
        }
        case ExprKind::Binary: return binary(e, f);
        case ExprKind::Cond: return eval(*e.kids.at(0), f).truth() ? eval(*e.kids.at(1), f) : eval(*e.kids.at(2), f);
        case ExprKind::NewArray: {
            std::int64_t n = eval(*e.kids.at(0), f).i;
            if (n < 0) throw Fault{"negative array size"};
            ObjId o = st_.next_id++;
            st_.types[o] = e.decl_type.to_string();
            write(o, kCreated, Value::boolean(true));
            write(o, kLength, Value::integer(n));
            return Value::ref(o);
        }
        default: throw std::invalid_argument("expression cannot be executed");
        }
    }

    Value binary(const Expr& e, Frame& f) {
        const Expr& l = *e.kids.at(0);
        const Expr& r = *e.kids.at(1);
        switch (e.bop) {
        case BinOp::And: return Value::boolean(eval(l, f).truth() && eval(r, f).truth());
        case BinOp::Or: return Value::boolean(eval(l, f).truth() || eval(r, f).truth());
        case BinOp::Implies: return Value::boolean(!eval(l, f).truth() || eval(r, f).truth());
        default: break;
        }
        Value a = eval(l, f);
        Value b = eval(r, f);
        switch (e.bop) {
        case BinOp::Add: return Value::integer(a.i + b.i);
        case BinOp::Sub: return Value::integer(a.i - b.i);
        case BinOp::Mul: return Value::integer(a.i * b.i);
        case BinOp::Div:
            if (b.i == 0) throw Fault{"division by zero"};
            return Value::integer(logic::java_div(a.i, b.i));
        case BinOp::Mod:
            if (b.i == 0) throw Fault{"division by zero"};
            return Value::integer(logic::java_mod(a.i, b.i));
        case BinOp::Lt: return Value::boolean(a.i < b.i);
        case BinOp::Le: return Value::boolean(a.i <= b.i);
        case BinOp::Gt: return Value::boolean(a.i > b.i);
        case BinOp::Ge: return Value::boolean(a.i >= b.i);
        case BinOp::Eq:
        case BinOp::Equiv: return Value::boolean(a.i == b.i);
        case BinOp::Ne: return Value::boolean(a.i != b.i);
        default: throw std::invalid_argument("operator cannot be executed");
        }
    }

    // Assignment target with receiver and index already evaluated.
    struct Place {
        bool local = false;
        std::string name;
        Loc loc;
    };

    Place place_of(const Expr& target, Frame& f) {
        switch (target.kind) {
        case ExprKind::Name:
            if (target.name_kind == NameKind::Field) return {false, {}, {f.self, field_key(target.owner, target.name)}};
            return {true, target.name, {}};
        case ExprKind::FieldAccess:
            return {false, {}, {eval(*target.receiver, f).i, field_key(target.owner, target.name)}};
        case ExprKind::ArrayAccess: {
            ObjId a = eval(*target.receiver, f).i;
            std::int64_t i = eval(*target.kids.at(0), f).i;
            if (a == 0) throw Fault{"null dereference"};
            return {false, {}, {a, FieldKey::slot(checked_index(a, i))}};
        }
        default: throw std::invalid_argument("not an assignable target");
        }
    }

    void exec_block(const std::vector<surface::StmtPtr>& body, Frame& f) {
        for (const auto& s : body) {
            exec(*s, f);
            if (f.ret) return;
        }
    }

    void exec(const Stmt& s, Frame& f) {
        tick();
        switch (s.kind) {
        case StmtKind::LocalDecl:
            f.locals[s.name] = s.value ? eval(*s.value, f) : zero_of(s.decl_type);
            return;
        case StmtKind::Assign: {
            Place pl = place_of(*s.target, f);
            Value v = eval(*s.value, f);
            if (pl.local) {
                f.locals[pl.name] = std::move(v);
            } else {
                write(pl.loc.obj, pl.loc.field, std::move(v));
            }
            return;
        }
        case StmtKind::ExprStmt: eval(*s.value, f); return;
        case StmtKind::If:
            if (eval(*s.value, f).truth()) {
                exec_block(s.body, f);
            } else if (s.has_else) {
                exec_block(s.else_body, f);
            }
            return;
        case StmtKind::While:
            while (!f.ret && eval(*s.value, f).truth()) {
                tick();
                exec_block(s.body, f);
            }
            return;
        case StmtKind::Return: f.ret = s.value ? eval(*s.value, f) : Value::integer(0); return;
        case StmtKind::Block: exec_block(s.body, f); return;
        }
    }

    const surface::Program& p_;
    long budget_;
    long steps_ = 0;
    ExecState& st_;
    std::set<Loc>& writes_;
    std::set<Loc>* reads_;
};

}  // namespace

ExecResult Interpreter::run(const std::string& cls, const std::string& method, ObjId self,
                            const std::vector<Value>& args, ExecState state, std::set<Loc>* reads) const {
    ExecResult r;
    r.state = std::move(state);
    Machine m(program_, budget_, r.state, r.writes, reads);
    try {
        r.result = m.call(cls, method, self, args);
    } catch (const Fault& f) {
        r.outcome = Outcome::RuntimeError;
        r.error = f.what;
    } catch (const OutOfSteps&) {
        r.outcome = Outcome::Diverged;
        r.error = "step budget exhausted";
    }
    return r;
}

}  // namespace abside::harness
