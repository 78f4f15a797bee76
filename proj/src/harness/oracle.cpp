#include "abside/harness/oracle.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <variant>

#include "abside/harness/interpreter.hpp"
#include "abside/logic/eval.hpp"

namespace abside::harness {

using logic::FieldKey;
using logic::Loc;
using logic::ObjId;
using logic::Value;
using surface::TypeRef;

namespace {

const FieldKey kLength = FieldKey::named("length");
const FieldKey kCreated = FieldKey::named("Object::created");

// A parameter value or a heap cell.
using Target = std::variant<std::size_t, Loc>;
using Assignment = std::vector<std::pair<Target, Value>>;

struct Slot {
    std::string label;
    std::vector<Assignment> choices;
};

// Literal array lengths fixed by class invariants: `f.length == N` or
// `N == f.length` at the top of a conjunction.
void collect_lengths(const surface::ExprPtr& e, std::map<std::string, int>& out) {
    using surface::BinOp;
    using surface::ExprKind;
    if (!e || e->kind != ExprKind::Binary) return;
    if (e->bop == BinOp::And) {
        collect_lengths(e->kids[0], out);
        collect_lengths(e->kids[1], out);
        return;
    }
    if (e->bop != BinOp::Eq) return;
    for (int side = 0; side < 2; ++side) {
        const auto& len = e->kids[side];
        const auto& lit = e->kids[1 - side];
        if (len->kind != ExprKind::FieldAccess || !len->is_length || lit->kind != ExprKind::IntLit) continue;
        const auto& arr = len->receiver;
        bool own_field = arr->kind == ExprKind::Name && arr->name_kind == surface::NameKind::Field;
        bool this_field = arr->kind == ExprKind::FieldAccess && arr->receiver && arr->receiver->kind == ExprKind::This;
        if ((own_field || this_field) && lit->ival >= 0) out.emplace(arr->owner + "::" + arr->name, static_cast<int>(lit->ival));
    }
}

std::vector<Value> scalar_domain(const TypeRef& t, const OracleConfig& cfg) {
    std::vector<Value> d;
    if (t.kind == TypeRef::Kind::Bool) {
        d = {Value::boolean(false), Value::boolean(true)};
    } else {
        for (std::int64_t v = cfg.int_lo; v <= cfg.int_hi; ++v) d.push_back(Value::integer(v));
    }
    return d;
}

bool same_cell(const logic::HeapCells& a, const logic::HeapCells& b, const Loc& l) {
    auto ia = a.find(l);
    auto ib = b.find(l);
    if (ia != a.end() && ib != b.end()) return ia->second == ib->second;
    if (ia == a.end() && ib == b.end()) return true;
    const Value& v = ia != a.end() ? ia->second : ib->second;
    return v.i == 0 && (v.kind == Value::Kind::Int || v.kind == Value::Kind::Bool || v.kind == Value::Kind::Ref);
}

class StateSpace {
public:
    StateSpace(const speclang::SpecEnv& env, const std::string& cls, const surface::MethodDecl& m,
               const OracleConfig& cfg)
        : env_(env), cfg_(cfg) {
        lengths_ = cfg.array_lengths;
        for (const auto& c : env.program().classes) {
            // Definitions of abstract invariants count as invariants here.
            for (const auto& spec : c.specs) {
                for (const auto& cl : spec.clauses) {
                    for (const auto& e : cl.exprs) collect_lengths(e, lengths_);
                }
            }
        }
        self_ = add_object(cls);
        for (const auto& p : m.params) {
            if (p.type.kind == TypeRef::Kind::Class) add_object(p.type.cls);
        }
        close_over_fields();
        build_slots(m);
        // Large domains vary fastest, so a precondition failing on a small
        // slot skips whole blocks of them.
        std::stable_sort(slots_.begin(), slots_.end(),
                         [](const Slot& a, const Slot& b) { return a.choices.size() > b.choices.size(); });
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            for (const auto& choice : slots_[i].choices) {
                for (const auto& [target, v] : choice) {
                    if (const auto* idx = std::get_if<std::size_t>(&target)) {
                        param_slot_[m.params[*idx].name] = i;
                    } else {
                        cell_slot_[std::get<Loc>(target)] = i;
                    }
                }
            }
        }
    }

    // Slot deciding a heap cell or a parameter (by source name), if any.
    std::optional<std::size_t> slot_of_cell(const Loc& l) const {
        auto it = cell_slot_.find(l);
        return it == cell_slot_.end() ? std::nullopt : std::optional(it->second);
    }
    std::optional<std::size_t> slot_of_param(const std::string& name) const {
        auto it = param_slot_.find(name);
        return it == param_slot_.end() ? std::nullopt : std::optional(it->second);
    }

    const std::vector<Slot>& slots() const { return slots_; }
    ObjId self() const { return self_; }
    ObjId first_fresh() const { return next_id_; }
    int max_length() const { return max_len_; }
    const std::map<std::string, std::vector<ObjId>>& objects() const { return objects_; }

    // Heap and parameter values for one choice per slot.
    void materialize(const std::vector<std::size_t>& pick, ExecState& st, std::vector<Value>& params) const {
        st.heap = base_heap_;
        st.types = types_;
        st.next_id = next_id_;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            for (const auto& [target, v] : slots_[i].choices[pick[i]]) {
                if (const auto* idx = std::get_if<std::size_t>(&target)) {
                    params[*idx] = v;
                } else {
                    st.heap[std::get<Loc>(target)] = v;
                }
            }
        }
    }

    std::string describe(const std::vector<std::size_t>& pick, const surface::MethodDecl& m) const {
        std::ostringstream os;
        os << "self=o" << self_;
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            for (const auto& [target, v] : slots_[i].choices[pick[i]]) {
                if (const auto* idx = std::get_if<std::size_t>(&target)) {
                    os << " " << m.params[*idx].name << "=" << v.to_string();
                } else {
                    const Loc& l = std::get<Loc>(target);
                    os << " o" << l.obj << "." << (l.field.is_slot() ? "[" + std::to_string(l.field.index) + "]" : l.field.name)
                       << "=" << v.to_string();
                }
            }
        }
        return os.str();
    }

private:
    ObjId add_object(const std::string& cls) {
        ObjId o = next_id_++;
        objects_[cls].push_back(o);
        types_[o] = cls;
        base_heap_[{o, kCreated}] = Value::boolean(true);
        return o;
    }

    // One object for each class reachable through reference fields.
    void close_over_fields() {
        for (bool grew = true; grew;) {
            grew = false;
            auto snapshot = objects_;
            for (const auto& [cls, ids] : snapshot) {
                const surface::ClassDecl* c = env_.program().find_class(cls);
                if (!c) continue;
                for (const auto& f : c->fields) {
                    if (f.type.kind == TypeRef::Kind::Class && !objects_.count(f.type.cls) &&
                        env_.program().find_class(f.type.cls)) {
                        add_object(f.type.cls);
                        grew = true;
                    }
                }
            }
        }
    }

    std::vector<Value> refs_of(const std::string& cls) const {
        std::vector<Value> d{Value::ref(0)};
        auto it = objects_.find(cls);
        if (it != objects_.end()) {
            for (ObjId o : it->second) d.push_back(Value::ref(o));
        }
        return d;
    }

    void build_slots(const surface::MethodDecl& m) {
        auto owners = objects_;
        for (const auto& [cls, ids] : owners) {
            const surface::ClassDecl* c = env_.program().find_class(cls);
            if (!c) continue;
            for (ObjId o : ids) {
                for (const auto& f : c->fields) {
                    if (f.constant) continue;
                    Loc loc{o, FieldKey::named(cls + "::" + f.name)};
                    std::string label = "o" + std::to_string(o) + "." + f.name;
                    if (f.type.is_array()) {
                        add_array_slot(label, loc, cls + "::" + f.name, f.type);
                    } else if (f.type.kind == TypeRef::Kind::Class) {
                        add_value_slot(label, loc, refs_of(f.type.cls));
                    } else {
                        add_value_slot(label, loc, scalar_domain(f.type, cfg_));
                    }
                }
            }
        }
        // Reference parameters are never null: the side conditions exclude it.
        for (std::size_t i = 0; i < m.params.size(); ++i) {
            const auto& p = m.params[i];
            std::vector<Value> d;
            if (p.type.kind == TypeRef::Kind::Class) {
                d = refs_of(p.type.cls);
                d.erase(d.begin());
            } else if (p.type.is_array()) {
                d = {Value::ref(new_array(p.type, cfg_.array_length))};
            } else {
                d = scalar_domain(p.type, cfg_);
            }
            Slot s{p.name, {}};
            for (const auto& v : d) s.choices.push_back({{Target{i}, v}});
            slots_.push_back(std::move(s));
        }
    }

    void add_value_slot(const std::string& label, const Loc& loc, const std::vector<Value>& d) {
        Slot s{label, {}};
        for (const auto& v : d) s.choices.push_back({{Target{loc}, v}});
        slots_.push_back(std::move(s));
    }

    ObjId new_array(const TypeRef& t, int len) {
        ObjId a = next_id_++;
        std::string sort = t.to_string();
        objects_[sort].push_back(a);
        types_[a] = sort;
        base_heap_[{a, kCreated}] = Value::boolean(true);
        base_heap_[{a, kLength}] = Value::integer(len);
        max_len_ = std::max(max_len_, len);
        return a;
    }

    // The field holds null or its own array. The contents are a separate
    // slot, so reading only the reference leaves them free.
    void add_array_slot(const std::string& label, const Loc& loc, const std::string& key, const TypeRef& t) {
        auto it = lengths_.find(key);
        int len = it != lengths_.end() ? it->second : cfg_.array_length;
        ObjId a = new_array(t, len);
        add_value_slot(label, loc, {Value::ref(0), Value::ref(a)});
        Slot s{label + "[]", {}};
        auto elem = scalar_domain(t.kind == TypeRef::Kind::BoolArray ? TypeRef::bool_() : TypeRef::int_(), cfg_);
        std::vector<std::size_t> digit(len, 0);
        for (;;) {
            Assignment as;
            for (int i = 0; i < len; ++i) as.push_back({Target{Loc{a, FieldKey::slot(i)}}, elem[digit[i]]});
            s.choices.push_back(std::move(as));
            int i = 0;
            while (i < len && ++digit[i] == elem.size()) digit[i++] = 0;
            if (i == len) break;
        }
        slots_.push_back(std::move(s));
    }

    const speclang::SpecEnv& env_;
    const OracleConfig& cfg_;
    std::map<std::string, int> lengths_;
    std::map<std::string, std::vector<ObjId>> objects_;
    std::map<ObjId, std::string> types_;
    logic::HeapCells base_heap_;
    std::vector<Slot> slots_;
    std::map<Loc, std::size_t> cell_slot_;
    std::map<std::string, std::size_t> param_slot_;
    ObjId self_ = 0;
    ObjId next_id_ = 1;
    int max_len_ = 0;
};

constexpr std::size_t kMaxSpace = std::size_t(1) << 48;

// Heap equality reads every cell, which the read tracking does not see.
bool compares_heaps(const logic::Term& t) {
    if (t.op() == logic::Op::Eq && t.arg(0).sort().kind() == logic::Sort::Kind::Heap) return true;
    for (const auto& a : t.args()) {
        if (compares_heaps(a)) return true;
    }
    return false;
}

std::vector<FieldKey> field_domain(const surface::Program& p, int max_len) {
    std::vector<FieldKey> out{kCreated, kLength};
    for (const auto& c : p.classes) {
        for (const auto& f : c.fields) {
            if (!f.constant) out.push_back(FieldKey::named(c.name + "::" + f.name));
        }
    }
    for (int i = 0; i < max_len; ++i) out.push_back(FieldKey::slot(i));
    return out;
}

}  // namespace

OracleReport check_contract(const speclang::SpecEnv& env, const std::string& cls, const std::string& method,
                            const OracleConfig& cfg) {
    const surface::MethodDecl& m = env.typed().method(cls, method);
    const speclang::Contract& c = env.contract(cls, method);
    OracleReport rep;
    rep.contract = c.id();

    StateSpace space(env, cls, m, cfg);
    const auto& slots = space.slots();
    // below[i]: number of states that differ only in slots < i.
    std::vector<std::size_t> below(slots.size() + 1, 1);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (below[i] > kMaxSpace / slots[i].choices.size())
            throw std::invalid_argument(rep.contract + ": state space too large for the oracle");
        below[i + 1] = below[i] * slots[i].choices.size();
    }
    rep.space = below.back();

    logic::Term pre = speclang::expand_all(logic::and_(c.pre, c.side), env.rules());
    logic::Term post = speclang::expand_all(c.post, env.rules());
    logic::Term mod = speclang::expand_all(c.mod, env.rules());
    const bool prune = cfg.prune && !compares_heaps(pre) && !compares_heaps(post) && !compares_heaps(mod);

    logic::Structure base;
    // Quantifiers over array indices must reach every element.
    base.int_lo = std::min<std::int64_t>(cfg.int_lo, -1);
    base.int_hi = std::max<std::int64_t>(cfg.int_hi, space.max_length());
    base.objects = space.objects();
    base.fields = field_domain(env.program(), space.max_length());

    std::map<std::string, std::size_t> pvar_slot;
    std::size_t lowest_param = slots.size();
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (auto sl = space.slot_of_param(m.params[i].name)) {
            pvar_slot[c.vars.params[i].name()] = *sl;
            lowest_param = std::min(lowest_param, *sl);
        }
    }

    // A verdict is a function of the pre-state cells and parameters read on
    // the way to it. Post-state cells written by the run carry values that
    // are themselves functions of earlier reads, so they are not recorded.
    std::set<Loc> reads;
    std::set<std::string> read_pvars;
    const logic::HeapCells* post_cells = nullptr;
    const std::set<Loc>* written = nullptr;
    auto observe = [&](const logic::HeapCells& h, const Loc& l) {
        if (&h == post_cells && written->count(l)) return;
        reads.insert(l);
    };

    Interpreter interp(env.program(), cfg.step_budget);
    std::vector<std::size_t> pick(slots.size(), 0);
    std::vector<Value> params(m.params.size());
    ExecState st;
    logic::Structure pre_m = base;
    logic::Structure post_m = base;
    if (prune) {
        pre_m.on_select = post_m.on_select = observe;
        pre_m.read_pvars = post_m.read_pvars = &read_pvars;
    }

    // Size of the block of states sharing every slot >= low with the
    // current one and not yet visited.
    auto block = [&](std::size_t low) {
        std::size_t offset = 0;
        for (std::size_t i = 0; i < low; ++i) offset += pick[i] * below[i];
        return below[low] - offset;
    };
    auto lowest_read = [&](bool ran) {
        if (!prune) return std::size_t(0);
        std::size_t low = ran ? lowest_param : slots.size();
        for (const Loc& l : reads) {
            if (auto sl = space.slot_of_cell(l)) low = std::min(low, *sl);
        }
        for (const auto& v : read_pvars) {
            auto it = pvar_slot.find(v);
            if (it != pvar_slot.end()) low = std::min(low, it->second);
        }
        return low;
    };
    // Moves past the block; false at the end of the space.
    auto advance = [&](std::size_t from) {
        for (std::size_t i = 0; i < from; ++i) pick[i] = 0;
        std::size_t i = from;
        while (i < slots.size() && ++pick[i] == slots[i].choices.size()) pick[i++] = 0;
        return i < slots.size();
    };

    for (bool more = true; more;) {
        if (rep.evaluations++ == cfg.max_evaluations) {
            rep.exhaustive = false;
            break;
        }
        reads.clear();
        read_pvars.clear();
        post_cells = nullptr;
        written = nullptr;
        space.materialize(pick, st, params);
        Value pre_heap = Value::of_heap(st.heap);
        pre_m.pvars[c.vars.heap.name()] = pre_heap;
        pre_m.pvars[c.vars.heap_pre.name()] = pre_heap;
        pre_m.pvars[c.vars.self.name()] = Value::ref(space.self());
        for (std::size_t i = 0; i < params.size(); ++i) pre_m.pvars[c.vars.params[i].name()] = params[i];

        if (!logic::evaluate(pre, pre_m).truth()) {
            std::size_t low = lowest_read(false);
            rep.states += block(low);
            more = advance(low);
            continue;
        }

        ExecResult r = interp.run(cls, method, space.self(), params, st, prune ? &reads : nullptr);
        if (r.outcome != Outcome::Normal) {
            std::size_t low = lowest_read(true);
            std::size_t n = block(low);
            rep.states += n;
            rep.pre_states += n;
            rep.vacuous += n;
            more = advance(low);
            continue;
        }

        std::string why;
        logic::LocSetVal allowed = *logic::evaluate(mod, pre_m).locs;
        Value post_heap = Value::of_heap(r.state.heap);
        post_cells = post_heap.heap.get();
        written = &r.writes;
        post_m.pvars = pre_m.pvars;
        post_m.pvars[c.vars.heap.name()] = post_heap;
        if (c.vars.result.valid()) post_m.pvars[c.vars.result.name()] = r.result;
        post_m.objects = base.objects;
        for (const auto& [o, type] : r.state.types) {
            if (o >= space.first_fresh()) post_m.objects[type].push_back(o);
        }
        if (!logic::evaluate(post, post_m).truth()) why = "postcondition fails";
        if (why.empty()) {
            for (const Loc& w : r.writes) {
                if (w.obj >= space.first_fresh() || allowed.count(w)) continue;
                reads.insert(w);
                if (same_cell(st.heap, r.state.heap, w)) continue;
                why = "writes non-assignable o" + std::to_string(w.obj) + "." +
                      (w.field.is_slot() ? "[" + std::to_string(w.field.index) + "]" : w.field.name);
                break;
            }
        }
        std::size_t low = lowest_read(true);
        std::size_t n = block(low);
        rep.states += n;
        rep.pre_states += n;
        if (!why.empty()) {
            if (rep.violations == 0) rep.witness = why + " in " + space.describe(pick, m);
            rep.violations += n;
        }
        more = advance(low);
    }
    return rep;
}

}  // namespace abside::harness
