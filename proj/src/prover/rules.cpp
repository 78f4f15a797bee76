#include "abside/prover/rules.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "abside/logic/simplify.hpp"
#include "abside/logic/syntax.hpp"
#include "abside/logic/update.hpp"
#include "abside/prover/decision.hpp"
#include "internal.hpp"

namespace abside::prover {

using namespace abside::logic;

namespace detail {

namespace {

using Cache = std::unordered_map<Term, Term, TermHash>;

template <class F>
Term cached(Cache& c, const Term& t, F&& f) {
    auto it = c.find(t);
    if (it != c.end()) return it->second;
    if (c.size() > 200000) c.clear();
    Term r = f(t);
    c.emplace(t, r);
    return r;
}

Term updates_rec(const Term& t) {
    if (is_modality(t.op())) return t;
    if (t.op() == Op::UpdApp) {
        Update u = update_of(t);
        for (auto& a : u) a.rhs = updates_rec(a.rhs);
        Term target = upd_target(t);
        if (is_modality(target.op())) return upd_app(prune(simplify_parallel(u), target), target);
        return updates_rec(apply_update(u, target));
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(updates_rec(a));
        changed |= args.back() != a;
    }
    return changed ? with_args(t, std::move(args)) : t;
}

}  // namespace

Term simplify_updates(const Term& t) {
    thread_local Cache c;
    return cached(c, t, updates_rec);
}

Term cached_simplify_heap(const Term& t) {
    thread_local Cache c;
    return cached(c, t, [](const Term& x) { return simplify_heap(x); });
}

Term cached_simplify_formula(const Term& t) {
    thread_local Cache c;
    return cached(c, t, [](const Term& x) { return simplify_formula(x); });
}

}  // namespace detail

namespace {

using detail::Names;

const std::vector<std::string> kSymbolicExecution = {"assignArray", "assignField",  "assignLocal", "blockFlatten",
                                                      "emptyModality", "ifElseSplit", "localDecl",  "returnStmt",
                                                      "unfoldCall"};
const std::vector<std::string> kSplits = {"andRight", "iffSplit", "ifThenElseSplit", "impLeft", "orLeft"};

struct Cand {
    std::string rule;
    Position pos;
    std::string inst;
};

bool before(const Cand& a, const Cand& b) {
    if (a.rule != b.rule) return a.rule < b.rule;
    if (a.pos < b.pos) return true;
    if (b.pos < a.pos) return false;
    return a.inst < b.inst;
}

std::optional<RuleApp> best(const std::vector<Cand>& cs) {
    if (cs.empty()) return std::nullopt;
    const Cand* b = &cs.front();
    for (const auto& c : cs)
        if (before(c, *b)) b = &c;
    RuleApp app;
    app.rule = b->rule;
    app.pos = b->pos;
    app.inst = b->inst;
    return app;
}

RuleApp closing(const std::string& rule) {
    RuleApp a;
    a.rule = rule;
    return a;
}

template <class F>
void for_each_formula(const Sequent& g, F&& f) {
    for (std::size_t i = 0; i < g.ante().size(); ++i) f(Position{Side::Ante, i, {}}, g.ante()[i]);
    for (std::size_t i = 0; i < g.succ().size(); ++i) f(Position{Side::Succ, i, {}}, g.succ()[i]);
}

// ---- closing ----

bool congruence_closes(const Sequent& g) {
    std::vector<Term> a, s;
    for (const auto& f : g.ante())
        if (is_literal(f)) a.push_back(f);
    for (const auto& f : g.succ())
        if (is_literal(f)) s.push_back(f);
    if (a.empty() && s.empty()) return false;
    std::sort(a.begin(), a.end());
    std::sort(s.begin(), s.end());
    thread_local std::map<std::pair<std::vector<Term>, std::vector<Term>>, bool> memo;
    auto key = std::make_pair(std::move(a), std::move(s));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (memo.size() > 50000) memo.clear();
    bool r = refute(key.first, key.second);
    memo.emplace(std::move(key), r);
    return r;
}

bool axiom_closes(const Sequent& g) {
    for (const auto& f : g.ante())
        if (g.contains(Side::Succ, f)) return true;
    return false;
}

// ---- placeholder occurrences ----

struct Occurrence {
    TermPath path;
    const speclang::RewriteRule* rule;
};

void occurrences(const Term& t, TermPath& path, const speclang::ProofObligation& po, std::vector<Occurrence>& out) {
    if (is_modality(t.op())) return;
    if (t.op() == Op::Func) {
        for (const auto& r : po.rules) {
            if (r.placeholder == t.name()) {
                out.push_back({path, &r});
                break;
            }
        }
    }
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        path.push_back(static_cast<int>(i));
        occurrences(t.arg(i), path, po, out);
        path.pop_back();
    }
}

const speclang::RewriteRule* rule_named(const speclang::ProofObligation& po, const std::string& name) {
    for (const auto& r : po.rules)
        if (r.name == name) return &r;
    return nullptr;
}

const speclang::RewriteRule* rule_for_placeholder(const speclang::ProofObligation& po, const std::string& ph) {
    for (const auto& r : po.rules)
        if (r.placeholder == ph) return &r;
    return nullptr;
}

// ---- replaceKnown ----

using Known = std::unordered_map<Term, bool, TermHash>;

Known known_atoms(const Sequent& g) {
    Known k;
    auto note = [&](const Term& f, bool value) {
        if (!is_literal(f)) return;
        if (f.op() == Op::Not) {
            k.emplace(f.arg(0), !value);
        } else if (f.op() != Op::True && f.op() != Op::False) {
            k.emplace(f, value);
        }
    };
    for (const auto& f : g.ante()) note(f, true);
    for (const auto& f : g.succ()) note(f, false);
    return k;
}

Term replace_known(const Term& t, const Known& k, const Term& self, bool top) {
    if (!top && t != self) {
        auto it = k.find(t);
        if (it != k.end()) return it->second ? tt() : ff();
    }
    if (is_modality(t.op()) || t.op() == Op::UpdApp || t.args().empty()) return t;
    std::vector<Term> args;
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(replace_known(a, k, self, false));
        changed |= args.back() != a;
    }
    return changed ? with_args(t, std::move(args)) : t;
}

// The known atoms other than f itself.
Term replace_known_in(const Sequent& g, const Position& p, const Known& k) {
    const Term& f = g.formula(p);
    Known own = k;
    const Term& core = f.op() == Op::Not ? f.arg(0) : f;
    own.erase(core);
    return replace_known(f, own, f, true);
}

// ---- bounded quantifiers ----

void conjuncts(const Term& t, std::vector<Term>& out) {
    if (t.op() == Op::And) {
        conjuncts(t.arg(0), out);
        conjuncts(t.arg(1), out);
    } else {
        out.push_back(t);
    }
}

std::optional<Term> expand_bounded(const Term& q, int qlimit) {
    if ((q.op() != Op::Forall && q.op() != Op::Exists) || !q.arg(0).sort().is_int()) return std::nullopt;
    const Term& x = q.arg(0);
    const Term& body = q.arg(1);
    bool all = q.op() == Op::Forall;
    if (body.op() != (all ? Op::Imp : Op::And)) return std::nullopt;
    std::vector<Term> cs, rest;
    conjuncts(body.arg(0), cs);
    std::optional<std::int64_t> lo, hi;
    for (const auto& c : cs) {
        std::int64_t v = 0;
        if ((c.op() == Op::Le || c.op() == Op::Lt) && c.arg(0) == x && is_int_literal(c.arg(1), &v)) {
            std::int64_t b = c.op() == Op::Le ? v : v - 1;
            hi = hi ? std::min(*hi, b) : b;
        } else if ((c.op() == Op::Le || c.op() == Op::Lt) && c.arg(1) == x && is_int_literal(c.arg(0), &v)) {
            std::int64_t b = c.op() == Op::Le ? v : v + 1;
            lo = lo ? std::max(*lo, b) : b;
        } else {
            rest.push_back(c);
        }
    }
    if (!lo || !hi) return std::nullopt;
    if (*hi - *lo + 1 > qlimit) return std::nullopt;
    std::vector<Term> inst;
    for (std::int64_t k = *lo; k <= *hi; ++k) {
        Term g = conj(rest);
        Term b = all ? imp(g, body.arg(1)) : and_(g, body.arg(1));
        if (rest.empty()) b = body.arg(1);
        inst.push_back(substitute(b, x, int_lit(k)));
    }
    return all ? conj(inst) : disj(inst);
}

// ---- allLeft ----

bool match(const Term& p, const Term& g, const Term& x, Term& binding) {
    if (p.op() == Op::LVar && p.name() == x.name()) {
        if (binding.valid()) return binding == g;
        binding = g;
        return true;
    }
    if (p.op() != g.op() || p.name() != g.name() || p->value != g->value || p.args().size() != g.args().size() ||
        p.sort() != g.sort())
        return false;
    if (p.op() == Op::UpdApp || is_modality(p.op())) return p == g;
    for (std::size_t i = 0; i < p.args().size(); ++i)
        if (!match(p.arg(i), g.arg(i), x, binding)) return false;
    return true;
}

bool has_lvar(const Term& t) {
    bool found = false;
    visit(t, [&](const Term& s) {
        if (s.op() == Op::LVar) found = true;
        return !found;
    });
    return found;
}

// Ground instantiations of the ante quantifier at index i, in discovery
// order. Triggers are subterms that take the bound variable as a direct
// argument of an array slot, a heap read or a function.
std::vector<Term> instantiations(const Sequent& g, std::size_t i) {
    const Term& q = g.ante()[i];
    const Term& x = q.arg(0);
    std::vector<Term> patterns;
    visit(q.arg(1), [&](const Term& s) {
        if (is_modality(s.op()) || s.op() == Op::UpdApp) return false;
        if (s.op() == Op::Arr || s.op() == Op::Select || s.op() == Op::Func) {
            bool direct = false;
            for (const auto& a : s.args()) direct |= a.op() == Op::LVar && a.name() == x.name();
            auto fv = free_logical_variables(s);
            if (direct && fv.size() == 1) patterns.push_back(s);
        }
        return true;
    });
    std::vector<Term> out;
    if (patterns.empty()) return out;
    auto scan = [&](const Term& f) {
        visit(f, [&](const Term& s) {
            if (is_modality(s.op()) || s.op() == Op::Forall || s.op() == Op::Exists) return false;
            for (const auto& p : patterns) {
                if (p.op() != s.op()) continue;
                Term b;
                if (match(p, s, x, b) && b.valid() && !has_lvar(b) && b.sort().is_subsort_of(x.sort()) &&
                    std::find(out.begin(), out.end(), b) == out.end())
                    out.push_back(b);
            }
            return true;
        });
    };
    for (std::size_t j = 0; j < g.ante().size(); ++j)
        if (j != i) scan(g.ante()[j]);
    for (const auto& f : g.succ()) scan(f);
    std::vector<Term> fresh;
    for (const auto& t : out) {
        if (g.instantiated(q.hash(), t.hash())) continue;
        if (g.contains(Side::Ante, substitute(q.arg(1), x, t))) continue;
        fresh.push_back(t);
    }
    return fresh;
}

// ---- conditional terms ----

bool first_ite(const Term& t, TermPath& path) {
    if (is_modality(t.op()) || t.op() == Op::UpdApp) return false;
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        path.push_back(static_cast<int>(i));
        if (first_ite(t.arg(i), path)) return true;
        path.pop_back();
    }
    return t.op() == Op::Ite && !has_lvar(t.arg(0));
}

bool is_atomic_formula(const Term& t) {
    switch (t.op()) {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Imp:
    case Op::Iff:
    case Op::Forall:
    case Op::Exists:
    case Op::Ite:
    case Op::UpdApp:
    case Op::Box:
    case Op::Diamond: return false;
    default: return true;
    }
}

void check_position(const Sequent& g, const Position& p) {
    if (p.index >= g.side(p.side).size()) throw RuleError("position " + to_string(p) + " does not exist");
}

}  // namespace

std::optional<int> rule_cost(const std::string& rule, const Settings& s) {
    static const std::map<std::string, int> fixed = {
        {"closeTrue", 0},        {"closeFalse", 0},        {"closeAxiom", 0},      {"closeCongruence", 0},
        {"notLeft", -6000},      {"notRight", -6000},      {"andLeft", -6000},     {"orRight", -6000},
        {"impRight", -6000},     {"allRight", -6000},      {"exLeft", -6000},      {"useClassInvariant", -5600},
        {"replaceKnown", -5500}, {"simplifyFormula", -5500}, {"simplifyHeap", -5500}, {"simplifyUpdate", -5500},
        {"methodContract", -3000}, {"loopInvariant", -2500}, {"allLeft", -1000},    {"expandBoundedQuantifier", 150},
    };
    bool abstract = s.mode == Mode::FinishAbstractProof;
    if (rule.rfind("expand_def", 0) == 0) return abstract ? std::nullopt : std::optional<int>(-5700);
    if (rule == "useClassInvariant" && abstract) return std::nullopt;
    if (std::find(kSymbolicExecution.begin(), kSymbolicExecution.end(), rule) != kSymbolicExecution.end()) return -4000;
    if (std::find(kSplits.begin(), kSplits.end(), rule) != kSplits.end()) {
        return s.splits ? std::optional<int>(100) : std::nullopt;
    }
    auto it = fixed.find(rule);
    if (it == fixed.end()) return std::nullopt;
    return it->second;
}

std::optional<RuleApp> select_rule(const Sequent& g, const Proof& proof, const Settings& s) {
    // Syntactic closure is available in every mode.
    if (axiom_closes(g)) return closing("closeAxiom");
    if (g.contains(Side::Ante, ff())) return closing("closeFalse");
    if (g.contains(Side::Succ, tt())) return closing("closeTrue");
    if (s.mode == Mode::FinishSymbolicExecution && !g.has_modality()) return std::nullopt;
    const auto& po = proof.obligation();
    if (!g.has_modality() && congruence_closes(g)) return closing("closeCongruence");

    std::vector<Cand> cs;
    for_each_formula(g, [&](const Position& p, const Term& f) {
        bool ante = p.side == Side::Ante;
        switch (f.op()) {
        case Op::Not: cs.push_back({ante ? "notLeft" : "notRight", p, {}}); break;
        case Op::And:
            if (ante) cs.push_back({"andLeft", p, {}});
            break;
        case Op::Exists:
            if (ante) cs.push_back({"exLeft", p, {}});
            break;
        case Op::Or:
            if (!ante) cs.push_back({"orRight", p, {}});
            break;
        case Op::Imp:
            if (!ante) cs.push_back({"impRight", p, {}});
            break;
        case Op::Forall:
            if (!ante) cs.push_back({"allRight", p, {}});
            break;
        default: break;
        }
    });
    if (auto a = best(cs)) return a;

    if (s.mode != Mode::FinishAbstractProof) {
        std::vector<Cand> defs, invs;
        for_each_formula(g, [&](const Position& p, const Term& f) {
            std::vector<Occurrence> occ;
            TermPath path;
            occurrences(f, path, po, occ);
            for (const auto& o : occ) {
                Position q = p;
                q.path = o.path;
                if (o.rule->rule_set == "class_invariant") {
                    invs.push_back({"useClassInvariant", q, o.rule->placeholder});
                } else {
                    defs.push_back({o.rule->name, q, {}});
                }
            }
        });
        if (auto a = best(defs)) return a;
        if (auto a = best(invs)) return a;
    }

    {
        Known k = known_atoms(g);
        std::optional<RuleApp> found;
        auto first = [&](const std::string& rule, const std::function<bool(const Position&, const Term&)>& applies) {
            if (found) return;
            for_each_formula(g, [&](const Position& p, const Term& f) {
                if (!found && applies(p, f)) {
                    RuleApp a;
                    a.rule = rule;
                    a.pos = p;
                    found = a;
                }
            });
        };
        first("replaceKnown", [&](const Position& p, const Term& f) { return replace_known_in(g, p, k) != f; });
        first("simplifyFormula", [&](const Position&, const Term& f) { return detail::cached_simplify_formula(f) != f; });
        first("simplifyHeap", [&](const Position&, const Term& f) { return detail::cached_simplify_heap(f) != f; });
        first("simplifyUpdate", [&](const Position&, const Term& f) { return detail::simplify_updates(f) != f; });
        if (found) return found;
    }

    std::vector<Cand> se, contracts, loops;
    for (std::size_t i = 0; i < g.succ().size(); ++i) {
        auto r = detail::symexec_rule(g.succ()[i]);
        if (!r) continue;
        Cand c{*r, Position{Side::Succ, i, {}}, {}};
        if (*r == "methodContract") {
            contracts.push_back(c);
        } else if (*r == "loopInvariant") {
            loops.push_back(c);
        } else {
            se.push_back(c);
        }
    }
    if (auto a = best(se)) return a;
    if (auto a = best(contracts)) return a;
    if (auto a = best(loops)) return a;

    std::vector<Cand> inst;
    for (std::size_t i = 0; i < g.ante().size(); ++i) {
        if (g.ante()[i].op() != Op::Forall) continue;
        for (const auto& t : instantiations(g, i)) inst.push_back({"allLeft", Position{Side::Ante, i, {}}, to_string(t)});
    }
    if (auto a = best(inst)) return a;

    if (s.splits) {
        std::vector<Cand> sp;
        for_each_formula(g, [&](const Position& p, const Term& f) {
            bool ante = p.side == Side::Ante;
            if (f.op() == Op::And && !ante) sp.push_back({"andRight", p, {}});
            if (f.op() == Op::Or && ante) sp.push_back({"orLeft", p, {}});
            if (f.op() == Op::Imp && ante) sp.push_back({"impLeft", p, {}});
            if (f.op() == Op::Iff && (!is_atomic_formula(f.arg(0)) || !is_atomic_formula(f.arg(1))))
                sp.push_back({"iffSplit", p, {}});
            TermPath path;
            if (first_ite(f, path)) {
                Position q = p;
                q.path = path;
                sp.push_back({"ifThenElseSplit", q, {}});
            }
        });
        if (auto a = best(sp)) return a;
    }

    std::vector<Cand> bq;
    for_each_formula(g, [&](const Position& p, const Term& f) {
        if (expand_bounded(f, s.qlimit)) bq.push_back({"expandBoundedQuantifier", p, {}});
    });
    if (auto a = best(bq)) return a;
    return std::nullopt;
}

std::vector<Sequent> apply_rule(const Sequent& g, RuleApp& app, Proof& proof, const Settings& s, bool replay) {
    const auto& po = proof.obligation();
    const std::vector<std::string> recorded = app.fresh;
    Names names(proof, replay ? &recorded : nullptr);
    const std::string& r = app.rule;
    std::vector<Sequent> out;

    auto finish = [&](std::vector<Sequent> premisses) {
        names.finish();
        if (replay && premisses.size() != app.branches)
            throw RuleError(r + " produced " + std::to_string(premisses.size()) + " premisses, recorded " +
                            std::to_string(app.branches));
        app.fresh = names.used();
        app.branches = premisses.size();
        return premisses;
    };

    if (r == "closeAxiom" || r == "closeCongruence" || r == "closeFalse" || r == "closeTrue") {
        bool ok = r == "closeAxiom"        ? axiom_closes(g)
                  : r == "closeCongruence" ? !g.has_modality() && congruence_closes(g)
                  : r == "closeFalse"      ? g.contains(Side::Ante, ff())
                                           : g.contains(Side::Succ, tt());
        if (!ok) throw RuleError(r + " does not close the goal");
        app.pos.reset();
        return finish({});
    }

    if (!app.pos) throw RuleError(r + " needs a position");
    const Position pos = *app.pos;
    check_position(g, pos);
    const Term& f = g.formula(pos);
    const Term* focus = nullptr;
    try {
        focus = &subterm_at(f, pos.path);
    } catch (const std::exception&) {
        throw RuleError("path of " + to_string(pos) + " does not exist");
    }
    std::size_t h = focus->hash();
    if (replay && app.focus_hash != h) throw RuleError(r + " at " + to_string(pos) + ": focused formula differs");
    app.focus_hash = h;
    bool ante = pos.side == Side::Ante;
    auto top_only = [&](Op op, bool want_ante) {
        if (!pos.path.empty() || f.op() != op || ante != want_ante) throw RuleError(r + " is not applicable at " + to_string(pos));
    };
    auto seq = [&]() { return g; };

    if (r == "notLeft" || r == "notRight") {
        top_only(Op::Not, r == "notLeft");
        Sequent a = seq();
        a.remove(pos.side, pos.index);
        a.add(ante ? Side::Succ : Side::Ante, f.arg(0));
        return finish({a});
    }
    if (r == "andLeft" || r == "orRight") {
        top_only(r == "andLeft" ? Op::And : Op::Or, r == "andLeft");
        Sequent a = seq();
        a.replace(pos.side, pos.index, f.arg(0));
        a.add(pos.side, f.arg(1));
        return finish({a});
    }
    if (r == "impRight") {
        top_only(Op::Imp, false);
        Sequent a = seq();
        a.replace(Side::Succ, pos.index, f.arg(1));
        a.add(Side::Ante, f.arg(0));
        return finish({a});
    }
    if (r == "allRight" || r == "exLeft") {
        top_only(r == "allRight" ? Op::Forall : Op::Exists, r == "exLeft");
        Term sk = func(names.take("sk"), f.arg(0).sort());
        Sequent a = seq();
        a.replace(pos.side, pos.index, substitute(f.arg(1), f.arg(0), sk));
        return finish({a});
    }
    if (r.rfind("expand_def_", 0) == 0 || r == "useClassInvariant") {
        const speclang::RewriteRule* rule =
            r == "useClassInvariant" ? rule_for_placeholder(po, app.inst) : rule_named(po, r);
        if (!rule) throw RuleError("no rewrite rule " + (r == "useClassInvariant" ? app.inst : r));
        if ((r == "useClassInvariant") != (rule->rule_set == "class_invariant"))
            throw RuleError(r + " does not belong to rule set " + rule->rule_set);
        if (!rule->matches(*focus)) throw RuleError(r + " does not match the focused term");
        Sequent a = seq();
        a.replace(pos.side, pos.index, replace_at(f, pos.path, rule->apply(*focus)));
        return finish({a});
    }
    if (r == "replaceKnown" || r == "simplifyFormula" || r == "simplifyHeap" || r == "simplifyUpdate") {
        if (!pos.path.empty()) throw RuleError(r + " applies to whole formulas");
        Term n = r == "replaceKnown"      ? replace_known_in(g, pos, known_atoms(g))
                 : r == "simplifyFormula" ? detail::cached_simplify_formula(f)
                 : r == "simplifyHeap"    ? detail::cached_simplify_heap(f)
                                          : detail::simplify_updates(f);
        if (n == f) throw RuleError(r + " does not change " + to_string(pos));
        Sequent a = seq();
        if ((ante && n.op() == Op::True) || (!ante && n.op() == Op::False)) {
            a.remove(pos.side, pos.index);
        } else {
            a.replace(pos.side, pos.index, n);
        }
        return finish({a});
    }
    if (r == "methodContract" || r == "loopInvariant" ||
        std::find(kSymbolicExecution.begin(), kSymbolicExecution.end(), r) != kSymbolicExecution.end()) {
        return finish(detail::apply_symexec(g, pos, r, app, names, po, s));
    }
    if (r == "allLeft") {
        top_only(Op::Forall, true);
        for (const auto& t : instantiations(g, pos.index)) {
            if (to_string(t) != app.inst) continue;
            Sequent a = seq();
            a.add(Side::Ante, substitute(f.arg(1), f.arg(0), t));
            a.mark_instantiated(f.hash(), t.hash());
            return finish({a});
        }
        throw RuleError("allLeft: instantiation " + app.inst + " is not available");
    }
    if (r == "andRight" || r == "orLeft") {
        top_only(r == "andRight" ? Op::And : Op::Or, r == "orLeft");
        Sequent a = seq(), b = seq();
        a.replace(pos.side, pos.index, f.arg(0));
        b.replace(pos.side, pos.index, f.arg(1));
        return finish({a, b});
    }
    if (r == "impLeft") {
        top_only(Op::Imp, true);
        Sequent a = seq(), b = seq();
        a.remove(Side::Ante, pos.index);
        a.add(Side::Succ, f.arg(0));
        b.replace(Side::Ante, pos.index, f.arg(1));
        return finish({a, b});
    }
    if (r == "iffSplit") {
        if (!pos.path.empty() || f.op() != Op::Iff) throw RuleError("iffSplit is not applicable");
        Sequent a = seq(), b = seq();
        if (ante) {
            a.replace(Side::Ante, pos.index, f.arg(0));
            a.add(Side::Ante, f.arg(1));
            b.remove(Side::Ante, pos.index);
            b.add(Side::Succ, f.arg(0));
            b.add(Side::Succ, f.arg(1));
        } else {
            a.replace(Side::Succ, pos.index, f.arg(1));
            a.add(Side::Ante, f.arg(0));
            b.replace(Side::Succ, pos.index, f.arg(0));
            b.add(Side::Ante, f.arg(1));
        }
        return finish({a, b});
    }
    if (r == "ifThenElseSplit") {
        if (focus->op() != Op::Ite || has_lvar(focus->arg(0))) throw RuleError("ifThenElseSplit is not applicable");
        Term c = focus->arg(0);
        Sequent a = seq(), b = seq();
        a.replace(pos.side, pos.index, replace_at(f, pos.path, focus->arg(1)));
        a.add(Side::Ante, c);
        b.replace(pos.side, pos.index, replace_at(f, pos.path, focus->arg(2)));
        b.add(Side::Succ, c);
        return finish({a, b});
    }
    if (r == "expandBoundedQuantifier") {
        if (!pos.path.empty()) throw RuleError(r + " applies to whole formulas");
        auto n = expand_bounded(f, s.qlimit);
        if (!n) throw RuleError(r + " is not applicable at " + to_string(pos));
        Sequent a = seq();
        a.replace(pos.side, pos.index, *n);
        return finish({a});
    }
    throw RuleError("unknown rule " + r);
}

}  // namespace abside::prover
