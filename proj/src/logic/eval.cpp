#include "abside/logic/eval.hpp"

#include <optional>

#include "abside/logic/simplify.hpp"

namespace abside::logic {

namespace {

bool is_zero_scalar(const Value& v) {
    return (v.kind == Value::Kind::Int || v.kind == Value::Kind::Bool || v.kind == Value::Kind::Ref) && v.i == 0;
}

// Heaps are compared as total functions: default cells are invisible.
bool heap_equal(const HeapCells& a, const HeapCells& b) {
    for (const auto& [l, v] : a) {
        auto it = b.find(l);
        if (it == b.end() ? !is_zero_scalar(v) : !(it->second == v)) return false;
    }
    for (const auto& [l, v] : b) {
        if (!a.count(l) && !is_zero_scalar(v)) return false;
    }
    return true;
}

}  // namespace

bool operator==(const Value& a, const Value& b) {
    switch (a.kind) {
    case Value::Kind::Int:
    case Value::Kind::Bool:
    case Value::Kind::Ref:
        // Bool and Ref zero values coincide with untyped zero reads.
        if (b.kind == Value::Kind::Heap || b.kind == Value::Kind::LocSet || b.kind == Value::Kind::Field) return false;
        return a.i == b.i;
    case Value::Kind::Field:
        return b.kind == Value::Kind::Field && a.f == b.f;
    case Value::Kind::Heap:
        return b.kind == Value::Kind::Heap && heap_equal(*a.heap, *b.heap);
    case Value::Kind::LocSet:
        return b.kind == Value::Kind::LocSet && *a.locs == *b.locs;
    }
    return false;
}

std::string Value::to_string() const {
    switch (kind) {
    case Kind::Int: return std::to_string(i);
    case Kind::Bool: return i ? "true" : "false";
    case Kind::Ref: return i ? "o" + std::to_string(i) : "null";
    case Kind::Field: return f.is_slot() ? "arr(" + std::to_string(f.index) + ")" : f.name;
    case Kind::Heap: {
        std::string s = "[";
        bool first = true;
        for (const auto& [l, v] : *heap) {
            if (is_zero_scalar(v)) continue;
            s += (first ? "" : ", ") + Value::ref(l.obj).to_string() + "." + Value::field(l.field).to_string() + "=" + v.to_string();
            first = false;
        }
        return s + "]";
    }
    case Kind::LocSet: {
        std::string s = "{";
        bool first = true;
        for (const auto& l : *locs) {
            s += (first ? "" : ", ") + Value::ref(l.obj).to_string() + "." + Value::field(l.field).to_string();
            first = false;
        }
        return s + "}";
    }
    }
    return "?";
}

Value zero_value(const Sort& s) {
    if (s.is_bool()) return Value::boolean(false);
    if (s.is_reference()) return Value::ref(0);
    return Value::integer(0);
}

std::vector<ObjId> Structure::objects_of(const Sort& s) const {
    std::vector<ObjId> out{0};
    if (s.kind() == Sort::Kind::Class) {
        auto it = objects.find(s.class_name());
        if (it != objects.end()) out.insert(out.end(), it->second.begin(), it->second.end());
        return out;
    }
    std::string key = s.to_string();
    auto it = objects.find(key);
    if (it != objects.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
        return out;
    }
    if (s.kind() == Sort::Kind::Object || s.kind() == Sort::Kind::Any) {
        std::set<ObjId> all;
        for (const auto& [k, v] : objects) all.insert(v.begin(), v.end());
        out.insert(out.end(), all.begin(), all.end());
    }
    return out;
}

LocSetVal Structure::universe() const {
    LocSetVal u;
    for (ObjId o : objects_of(Sort::object())) {
        for (const auto& f : fields) u.insert({o, f});
    }
    return u;
}

namespace {

class Evaluator {
public:
    explicit Evaluator(const Structure& m) : m_(m), pvars_(m.pvars), lvars_(m.lvars) {}

    Value eval(const Term& t) {
        switch (t.op()) {
        case Op::LVar: {
            auto it = lvars_.find(t.name());
            if (it == lvars_.end()) throw EvalError("unbound logical variable " + t.name());
            return it->second;
        }
        case Op::PVar: {
            auto it = pvars_.find(t.name());
            if (it == pvars_.end()) throw EvalError("uninterpreted program variable " + t.name());
            if (m_.read_pvars) m_.read_pvars->insert(t.name());
            return it->second;
        }
        case Op::Func: {
            auto it = m_.funcs.find(t.name());
            if (it == m_.funcs.end()) throw EvalError("uninterpreted function " + t.name());
            std::vector<Value> args;
            for (const auto& a : t.args()) args.push_back(eval(a));
            return it->second(args);
        }
        case Op::IntLit: return Value::integer(t->value);
        case Op::True: return Value::boolean(true);
        case Op::False: return Value::boolean(false);
        case Op::Null: return Value::ref(0);
        case Op::FieldConst: return Value::field(FieldKey::named(t.name()));
        case Op::Arr: return Value::field(FieldKey::slot(eval(t.arg(0)).i));
        case Op::Not: return Value::boolean(!eval(t.arg(0)).truth());
        case Op::And: return Value::boolean(eval(t.arg(0)).truth() && eval(t.arg(1)).truth());
        case Op::Or: return Value::boolean(eval(t.arg(0)).truth() || eval(t.arg(1)).truth());
        case Op::Imp: return Value::boolean(!eval(t.arg(0)).truth() || eval(t.arg(1)).truth());
        case Op::Iff: return Value::boolean(eval(t.arg(0)).truth() == eval(t.arg(1)).truth());
        case Op::Eq: return Value::boolean(eval(t.arg(0)) == eval(t.arg(1)));
        case Op::Lt: return Value::boolean(eval(t.arg(0)).i < eval(t.arg(1)).i);
        case Op::Le: return Value::boolean(eval(t.arg(0)).i <= eval(t.arg(1)).i);
        case Op::Add: return Value::integer(eval(t.arg(0)).i + eval(t.arg(1)).i);
        case Op::Sub: return Value::integer(eval(t.arg(0)).i - eval(t.arg(1)).i);
        case Op::Mul: return Value::integer(eval(t.arg(0)).i * eval(t.arg(1)).i);
        case Op::Div: return Value::integer(java_div(eval(t.arg(0)).i, eval(t.arg(1)).i));
        case Op::Mod: return Value::integer(java_mod(eval(t.arg(0)).i, eval(t.arg(1)).i));
        case Op::Neg: return Value::integer(-eval(t.arg(0)).i);
        case Op::Ite: return eval(t.arg(0)).truth() ? eval(t.arg(1)) : eval(t.arg(2));
        case Op::Forall:
        case Op::Exists: return quantifier(t);
        case Op::Select: {
            Value h = eval(t.arg(0));
            Value o = eval(t.arg(1));
            Value f = eval(t.arg(2));
            if (m_.on_select) m_.on_select(*h.heap, Loc{o.i, f.f});
            auto it = h.heap->find(Loc{o.i, f.f});
            if (it == h.heap->end()) return zero_value(t.sort());
            return it->second;
        }
        case Op::Store: {
            Value h = eval(t.arg(0));
            Value o = eval(t.arg(1));
            Value f = eval(t.arg(2));
            Value v = eval(t.arg(3));
            HeapCells c = *h.heap;
            c[Loc{o.i, f.f}] = v;
            return Value::of_heap(std::move(c));
        }
        case Op::Anon: {
            Value h = eval(t.arg(0));
            Value s = eval(t.arg(1));
            Value h2 = eval(t.arg(2));
            HeapCells c = *h.heap;
            for (const auto& l : *s.locs) {
                auto it = h2.heap->find(l);
                if (it == h2.heap->end()) {
                    c.erase(l);
                } else {
                    c[l] = it->second;
                }
            }
            return Value::of_heap(std::move(c));
        }
        case Op::Create: {
            Value h = eval(t.arg(0));
            Value o = eval(t.arg(1));
            HeapCells c = *h.heap;
            c[Loc{o.i, FieldKey::named("Object::created")}] = Value::boolean(true);
            return Value::of_heap(std::move(c));
        }
        case Op::Empty: return Value::of_locs({});
        case Op::AllLocs: return Value::of_locs(m_.universe());
        case Op::AllFields: {
            Value o = eval(t.arg(0));
            LocSetVal s;
            for (const auto& f : m_.fields) s.insert({o.i, f});
            return Value::of_locs(std::move(s));
        }
        case Op::Singleton: {
            Value o = eval(t.arg(0));
            Value f = eval(t.arg(1));
            return Value::of_locs({Loc{o.i, f.f}});
        }
        case Op::Union:
        case Op::Intersect:
        case Op::Setminus: {
            Value a = eval(t.arg(0));
            Value b = eval(t.arg(1));
            LocSetVal r;
            for (const auto& l : *a.locs) {
                bool in_b = b.locs->count(l) != 0;
                if (t.op() == Op::Union || (t.op() == Op::Intersect) == in_b) r.insert(l);
            }
            if (t.op() == Op::Union) r.insert(b.locs->begin(), b.locs->end());
            return Value::of_locs(std::move(r));
        }
        case Op::ElemOf: {
            Value o = eval(t.arg(0));
            Value f = eval(t.arg(1));
            const Term& s = t.arg(2);
            // allLocs holds every location, not only those of the finite universe.
            if (s.op() == Op::AllLocs) return Value::boolean(true);
            Value sv = eval(s);
            return Value::boolean(sv.locs->count(Loc{o.i, f.f}) != 0);
        }
        case Op::Subset: {
            Value a = eval(t.arg(0));
            Value b = eval(t.arg(1));
            for (const auto& l : *a.locs)
                if (!b.locs->count(l)) return Value::boolean(false);
            return Value::boolean(true);
        }
        case Op::UpdApp: {
            std::vector<std::pair<std::string, Value>> vals;
            for (std::size_t i = 0; i < t->lhs.size(); ++i) vals.emplace_back(t->lhs[i].name(), eval(t.arg(i)));
            auto saved = pvars_;
            for (auto& [n, v] : vals) pvars_[n] = std::move(v);
            Value r = eval(upd_target(t));
            pvars_ = std::move(saved);
            return r;
        }
        case Op::Box:
        case Op::Diamond:
            throw EvalError("modalities are not evaluated");
        }
        throw EvalError("unknown operator");
    }

private:
    Value quantifier(const Term& t) {
        const Term& v = t.arg(0);
        bool all = t.op() == Op::Forall;
        std::vector<Value> dom;
        const Sort& s = v.sort();
        if (s.is_int()) {
            for (std::int64_t k = m_.int_lo; k <= m_.int_hi; ++k) dom.push_back(Value::integer(k));
        } else if (s.is_bool()) {
            dom = {Value::boolean(false), Value::boolean(true)};
        } else if (s == Sort::field()) {
            for (const auto& f : m_.fields) dom.push_back(Value::field(f));
        } else if (s.is_reference()) {
            for (ObjId o : m_.objects_of(s)) dom.push_back(Value::ref(o));
        } else {
            throw EvalError("cannot quantify over " + s.to_string());
        }
        auto saved = lvars_.find(v.name()) != lvars_.end() ? std::optional<Value>(lvars_[v.name()]) : std::nullopt;
        bool result = all;
        for (const auto& d : dom) {
            lvars_[v.name()] = d;
            bool b = eval(t.arg(1)).truth();
            if (all && !b) {
                result = false;
                break;
            }
            if (!all && b) {
                result = true;
                break;
            }
        }
        if (saved) {
            lvars_[v.name()] = *saved;
        } else {
            lvars_.erase(v.name());
        }
        return Value::boolean(result);
    }

    const Structure& m_;
    std::map<std::string, Value> pvars_;
    std::map<std::string, Value> lvars_;
};

}  // namespace

Value evaluate(const Term& t, const Structure& m) {
    Evaluator e(m);
    return e.eval(t);
}

}  // namespace abside::logic
