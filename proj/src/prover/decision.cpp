#include "abside/prover/decision.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

namespace abside::prover {

using logic::Op;
using logic::Sort;
using logic::Term;

namespace {

bool ground_and_flat(const Term& t) {
    bool ok = true;
    logic::visit(t, [&](const Term& s) {
        switch (s.op()) {
        case Op::LVar:
        case Op::Forall:
        case Op::Exists:
        case Op::UpdApp:
        case Op::Box:
        case Op::Diamond: ok = false; return false;
        default: return ok;
        }
    });
    return ok;
}

bool atom_op(const Term& f) {
    if (!f.sort().is_bool()) return false;
    switch (f.op()) {
    case Op::Eq:
    case Op::Lt:
    case Op::Le:
    case Op::ElemOf:
    case Op::Subset:
    case Op::Func:
    case Op::PVar:
    case Op::Select:
    case Op::True:
    case Op::False: return true;
    case Op::Iff: return atom_op(f.arg(0)) && atom_op(f.arg(1));
    default: return false;
    }
}

// ---- linear arithmetic -------------------------------------------------

// sum(coef * x) <= c
struct Ineq {
    std::map<int, std::int64_t> coef;
    std::int64_t c = 0;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr std::int64_t kMagnitude = std::int64_t{1} << 40;

// Divides by the gcd of the coefficients and rounds the bound down, which
// is sound over the integers.
void tighten(Ineq& q) {
    for (auto it = q.coef.begin(); it != q.coef.end();) {
        it = it->second == 0 ? q.coef.erase(it) : std::next(it);
    }
    std::int64_t g = 0;
    for (const auto& [v, k] : q.coef) g = std::gcd(g, k < 0 ? -k : k);
    if (g > 1) {
        for (auto& [v, k] : q.coef) k /= g;
        q.c = floor_div(q.c, g);
    }
}

std::map<int, std::int64_t> negated(const std::map<int, std::int64_t>& coef) {
    std::map<int, std::int64_t> out;
    for (const auto& [v, k] : coef) out[v] = -k;
    return out;
}

// Opposite constraint pairs are equalities. Solving one for a variable with
// coefficient +-1 and substituting it everywhere is exact over the integers,
// which projection is not: 2x = y, y = 1 has rational solutions only. True
// when an equality is already contradictory.
bool substitute_equalities(std::vector<Ineq>& cs) {
    for (std::size_t round = 0; round < cs.size(); ++round) {
        std::map<std::map<int, std::int64_t>, std::int64_t> bound;
        for (auto& q : cs) {
            tighten(q);
            if (q.coef.empty()) continue;
            auto [it, fresh] = bound.emplace(q.coef, q.c);
            if (!fresh) it->second = std::min(it->second, q.c);
        }
        const std::map<int, std::int64_t>* eq = nullptr;
        std::int64_t rhs = 0;
        int var = -1;
        for (const auto& [coef, c] : bound) {
            auto other = bound.find(negated(coef));
            if (other == bound.end()) continue;
            if (c + other->second < 0) return true;
            if (c + other->second != 0) continue;
            for (const auto& [v, k] : coef) {
                if (k == 1 || k == -1) {
                    eq = &coef;
                    rhs = c;
                    var = v;
                    break;
                }
            }
            if (eq) break;
        }
        if (!eq) return false;
        // var = kv * (rhs - sum of the other terms)
        const auto sol = *eq;
        const std::int64_t kv = sol.at(var);
        for (auto& q : cs) {
            auto it = q.coef.find(var);
            if (it == q.coef.end()) continue;
            std::int64_t a = it->second;
            q.coef.erase(it);
            for (const auto& [w, kw] : sol) {
                if (w != var) q.coef[w] -= a * kv * kw;
            }
            q.c -= a * kv * rhs;
            bool huge = std::abs(q.c) > kMagnitude;
            for (const auto& [w, k] : q.coef) huge = huge || std::abs(k) > kMagnitude;
            if (huge) return false;
        }
    }
    return false;
}

bool fm_unsat(std::vector<Ineq> cs, int cap) {
    if (substitute_equalities(cs)) return true;
    for (;;) {
        std::map<std::map<int, std::int64_t>, std::int64_t> uniq;
        for (auto& q : cs) {
            tighten(q);
            if (q.coef.empty()) {
                if (q.c < 0) return true;
                continue;
            }
            auto [it, fresh] = uniq.emplace(q.coef, q.c);
            if (!fresh) it->second = std::min(it->second, q.c);
        }
        cs.clear();
        for (auto& [k, c] : uniq) cs.push_back(Ineq{k, c});
        if (cs.empty()) return false;

        std::map<int, std::pair<int, int>> occ;
        for (const auto& q : cs)
            for (const auto& [v, k] : q.coef) (k > 0 ? occ[v].first : occ[v].second)++;
        int best = -1;
        long best_score = -1;
        for (const auto& [v, pn] : occ) {
            long score = static_cast<long>(pn.first) * pn.second;
            if (best < 0 || score < best_score) {
                best = v;
                best_score = score;
            }
        }
        std::vector<Ineq> pos, neg, rest;
        for (auto& q : cs) {
            auto it = q.coef.find(best);
            if (it == q.coef.end()) {
                rest.push_back(std::move(q));
            } else {
                (it->second > 0 ? pos : neg).push_back(std::move(q));
            }
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                std::int64_t a = p.coef.at(best);
                std::int64_t b = -n.coef.at(best);
                Ineq r;
                for (const auto& [v, k] : p.coef) r.coef[v] += k * b;
                for (const auto& [v, k] : n.coef) r.coef[v] += k * a;
                r.c = p.c * b + n.c * a;
                bool huge = std::abs(r.c) > kMagnitude;
                for (const auto& [v, k] : r.coef) huge = huge || std::abs(k) > kMagnitude;
                if (huge) return false;
                r.coef.erase(best);
                rest.push_back(std::move(r));
            }
        }
        if (static_cast<int>(rest.size()) > cap) return false;
        cs = std::move(rest);
    }
}

// ---- congruence closure --------------------------------------------------

class Solver {
public:
    explicit Solver(const DecisionLimits& lim) : lim_(lim) {
        true_ = intern(logic::tt());
        false_ = intern(logic::ff());
        null_ = intern(logic::null_term());
    }

    void assume(const Term& lit, bool positive) {
        if (lit.op() == Op::Not) {
            assume(lit.arg(0), !positive);
            return;
        }
        int n = intern(lit);
        unite(n, positive ? true_ : false_);
    }

    bool refute() {
        for (int round = 0; round < 16; ++round) {
            if (!saturate()) return true;
            auto cs = arithmetic();
            if (!cs) return true;
            if (lia_unsat(*cs, 0)) return true;
            if (!propagate_equalities(*cs)) return false;
        }
        return false;
    }

private:
    int intern(const Term& t) {
        auto it = ids_.find(t);
        if (it != ids_.end()) return it->second;
        std::vector<int> kids;
        for (const auto& a : t.args()) kids.push_back(intern(a));
        int id = static_cast<int>(terms_.size());
        terms_.push_back(t);
        kids_.push_back(std::move(kids));
        parent_.push_back(id);
        ids_.emplace(t, id);
        return id;
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        // Keep the smaller id as representative for determinism.
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return true;
    }

    bool add_diseq(int a, int b) {
        auto key = std::minmax(a, b);
        return diseq_set_.insert(key).second ? (diseqs_.push_back(key), true) : false;
    }

    bool is_true(int n) { return find(n) == find(true_); }
    bool is_false(int n) { return find(n) == find(false_); }

    // Congruence, interpreted constants and connectives to a fixpoint.
    // False on conflict.
    bool saturate() {
        bool changed = true;
        while (changed) {
            changed = false;
            std::map<std::tuple<Op, std::string, std::string, std::int64_t, std::vector<int>>, int> sig;
            for (std::size_t n = 0; n < terms_.size(); ++n) {
                if (kids_[n].empty()) continue;
                const Term& t = terms_[n];
                std::vector<int> ks;
                for (int k : kids_[n]) ks.push_back(find(k));
                auto key = std::make_tuple(t.op(), t.name(), t.sort().to_string(), t->value, std::move(ks));
                auto [it, fresh] = sig.emplace(std::move(key), static_cast<int>(n));
                if (!fresh) changed |= unite(it->second, static_cast<int>(n));
            }
            for (std::size_t i = 0; i < terms_.size(); ++i) changed |= interpret(static_cast<int>(i));
            auto cls = classes();
            std::optional<bool> conflict_free = scan_classes(cls, changed);
            if (!conflict_free) return false;
            for (std::size_t i = 0; i < diseqs_.size(); ++i) {
                auto [a, b] = diseqs_[i];
                if (find(a) == find(b)) return false;
                if (terms_[a].sort().is_bool()) {
                    if (is_true(a)) changed |= unite(b, false_);
                    if (is_false(a)) changed |= unite(b, true_);
                    if (is_true(b)) changed |= unite(a, false_);
                    if (is_false(b)) changed |= unite(a, true_);
                }
            }
            if (find(true_) == find(false_)) return false;
        }
        return true;
    }

    bool interpret(int n) {
        const Term& t = terms_[n];
        const auto& k = kids_[n];
        bool ch = false;
        auto set_bool = [&](int x, bool v) { ch |= unite(x, v ? true_ : false_); };
        switch (t.op()) {
        case Op::Eq:
        case Op::Iff:
            if (is_true(n)) ch |= unite(k[0], k[1]);
            if (is_false(n)) ch |= add_diseq(k[0], k[1]);
            if (find(k[0]) == find(k[1])) set_bool(n, true);
            for (auto [a, b] : diseqs_) {
                if ((find(a) == find(k[0]) && find(b) == find(k[1])) || (find(a) == find(k[1]) && find(b) == find(k[0]))) {
                    set_bool(n, false);
                    break;
                }
            }
            break;
        case Op::Not:
            if (is_true(k[0])) set_bool(n, false);
            if (is_false(k[0])) set_bool(n, true);
            if (is_true(n)) set_bool(k[0], false);
            if (is_false(n)) set_bool(k[0], true);
            break;
        case Op::And:
            if (is_true(k[0]) && is_true(k[1])) set_bool(n, true);
            if (is_false(k[0]) || is_false(k[1])) set_bool(n, false);
            if (is_true(n)) {
                set_bool(k[0], true);
                set_bool(k[1], true);
            }
            break;
        case Op::Or:
            if (is_true(k[0]) || is_true(k[1])) set_bool(n, true);
            if (is_false(k[0]) && is_false(k[1])) set_bool(n, false);
            if (is_false(n)) {
                set_bool(k[0], false);
                set_bool(k[1], false);
            }
            break;
        case Op::Imp:
            if (is_false(k[0]) || is_true(k[1])) set_bool(n, true);
            if (is_true(k[0]) && is_false(k[1])) set_bool(n, false);
            if (is_false(n)) {
                set_bool(k[0], true);
                set_bool(k[1], false);
            }
            break;
        case Op::Ite:
            if (is_true(k[0])) ch |= unite(n, k[1]);
            if (is_false(k[0])) ch |= unite(n, k[2]);
            if (find(k[1]) == find(k[2])) ch |= unite(n, k[1]);
            break;
        case Op::Lt:
        case Op::Le: {
            auto a = literal_of(k[0]);
            auto b = literal_of(k[1]);
            if (a && b) set_bool(n, t.op() == Op::Lt ? *a < *b : *a <= *b);
            if (find(k[0]) == find(k[1])) set_bool(n, t.op() == Op::Le);
            break;
        }
        default: break;
        }
        return ch;
    }

    std::optional<std::int64_t> literal_of(int n) {
        auto it = lit_.find(find(n));
        if (it == lit_.end()) return std::nullopt;
        return it->second;
    }

    std::map<int, std::vector<int>> classes() {
        std::map<int, std::vector<int>> cls;
        for (std::size_t i = 0; i < terms_.size(); ++i) cls[find(static_cast<int>(i))].push_back(static_cast<int>(i));
        return cls;
    }

    // Literal values, distinct constants, arr injectivity and disjoint
    // reference sorts. nullopt on conflict.
    std::optional<bool> scan_classes(const std::map<int, std::vector<int>>& cls, bool& changed) {
        lit_.clear();
        for (const auto& [rep, members] : cls) {
            std::optional<std::int64_t> lit;
            std::optional<std::string> field;
            int arr_node = -1;
            std::optional<Sort> ref_sort;
            bool to_null = false;
            for (int m : members) {
                const Term& t = terms_[m];
                switch (t.op()) {
                case Op::IntLit:
                    if (lit && *lit != t->value) return std::nullopt;
                    lit = t->value;
                    break;
                case Op::FieldConst:
                    if (arr_node >= 0 || (field && *field != t.name())) return std::nullopt;
                    field = t.name();
                    break;
                case Op::Arr:
                    if (field) return std::nullopt;
                    if (arr_node >= 0) changed |= unite(kids_[arr_node][0], kids_[m][0]);
                    arr_node = m;
                    break;
                default: break;
                }
                const Sort& s = t.sort();
                if (s.is_reference() && s.kind() != Sort::Kind::Null) {
                    if (ref_sort && ref_sort->disjoint_references(s)) to_null = true;
                    if (!ref_sort) ref_sort = s;
                }
            }
            if (lit) lit_[rep] = *lit;
            if (to_null) changed |= unite(rep, null_);
        }
        return true;
    }

    // ---- arithmetic over integer classes ----

    struct Arith {
        std::vector<Ineq> cs;
        std::vector<std::pair<int, int>> diseqs;  // variable pairs
        std::map<int, int> var;                   // class -> variable
    };

    int var_of(Arith& a, int node) {
        int r = find(node);
        auto [it, fresh] = a.var.emplace(r, static_cast<int>(a.var.size()));
        return it->second;
    }

    // x_n expressed linearly in its children; nullopt for non-linear terms.
    std::optional<Ineq> linear(Arith& a, int n) {
        const Term& t = terms_[n];
        const auto& k = kids_[n];
        Ineq e;  // coef . x + c, stored with c as the constant term
        auto addv = [&](int node, std::int64_t m) {
            if (auto l = literal_of(node)) {
                e.c += m * *l;
            } else {
                e.coef[var_of(a, node)] += m;
            }
        };
        switch (t.op()) {
        case Op::Add: addv(k[0], 1); addv(k[1], 1); break;
        case Op::Sub: addv(k[0], 1); addv(k[1], -1); break;
        case Op::Neg: addv(k[0], -1); break;
        case Op::Mul: {
            auto l0 = literal_of(k[0]);
            auto l1 = literal_of(k[1]);
            if (l0) {
                addv(k[1], *l0);
            } else if (l1) {
                addv(k[0], *l1);
            } else {
                return std::nullopt;
            }
            break;
        }
        default: return std::nullopt;
        }
        return e;
    }

    // Constraint set of the integer part; nullopt when trivially conflicting.
    std::optional<Arith> arithmetic() {
        Arith a;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            int n = static_cast<int>(i);
            const Term& t = terms_[n];
            if (t.sort().is_int()) {
                if (auto l = literal_of(n)) {
                    int x = var_of(a, n);
                    a.cs.push_back(Ineq{{{x, 1}}, *l});
                    a.cs.push_back(Ineq{{{x, -1}}, -*l});
                }
                if (auto e = linear(a, n)) {
                    // x = coef . y + c
                    int x = var_of(a, n);
                    Ineq up = *e;
                    up.coef[x] -= 1;
                    up.c = -e->c;  // coef.y - x <= -c
                    Ineq down;
                    for (const auto& [v, k] : up.coef) down.coef[v] = -k;
                    down.c = e->c;
                    a.cs.push_back(up);
                    a.cs.push_back(down);
                }
            }
            if ((t.op() == Op::Lt || t.op() == Op::Le) && (is_true(n) || is_false(n))) {
                const auto& k = kids_[n];
                bool strict = t.op() == Op::Lt;
                int l = k[0], r = k[1];
                if (is_false(n)) {
                    std::swap(l, r);
                    strict = !strict;
                }
                Ineq q;
                auto addv = [&](int node, std::int64_t m) {
                    if (auto lv = literal_of(node)) {
                        q.c -= m * *lv;
                    } else {
                        q.coef[var_of(a, node)] += m;
                    }
                };
                addv(l, 1);
                addv(r, -1);
                if (strict) q.c -= 1;
                a.cs.push_back(std::move(q));
            }
        }
        for (auto [x, y] : diseqs_) {
            if (!terms_[x].sort().is_int()) continue;
            if (find(x) == find(y)) return std::nullopt;
            a.diseqs.emplace_back(var_of(a, x), var_of(a, y));
        }
        return a;
    }

    bool lia_unsat(const Arith& a, std::size_t next_diseq) {
        if (next_diseq >= a.diseqs.size() || static_cast<int>(next_diseq) >= lim_.max_disequality_splits) {
            return fm_unsat(a.cs, lim_.max_fm_constraints);
        }
        if (fm_unsat(a.cs, lim_.max_fm_constraints)) return true;
        auto [x, y] = a.diseqs[next_diseq];
        Arith lo = a, hi = a;
        lo.cs.push_back(Ineq{{{x, 1}, {y, -1}}, -1});
        hi.cs.push_back(Ineq{{{y, 1}, {x, -1}}, -1});
        return lia_unsat(lo, next_diseq + 1) && lia_unsat(hi, next_diseq + 1);
    }

    // Merges integer classes the arithmetic forces equal when they are the
    // only difference between two applications of the same symbol. Returns
    // false when nothing new was learned.
    bool propagate_equalities(Arith& a) {
        std::map<std::tuple<Op, std::string, std::string, std::size_t>, std::vector<int>> groups;
        for (std::size_t n = 0; n < terms_.size(); ++n) {
            if (kids_[n].empty()) continue;
            const Term& t = terms_[n];
            groups[{t.op(), t.name(), t.sort().to_string(), kids_[n].size()}].push_back(static_cast<int>(n));
        }
        std::set<std::pair<int, int>> pairs;
        for (auto& [key, nodes] : groups) {
            std::set<int> reps;
            std::vector<int> distinct;
            for (int n : nodes)
                if (reps.insert(find(n)).second) distinct.push_back(n);
            if (distinct.size() > 64) distinct.resize(64);
            for (std::size_t i = 0; i < distinct.size(); ++i) {
                for (std::size_t j = i + 1; j < distinct.size(); ++j) {
                    int p = distinct[i], q = distinct[j];
                    int diff = -1, count = 0;
                    for (std::size_t k = 0; k < kids_[p].size(); ++k) {
                        if (find(kids_[p][k]) != find(kids_[q][k])) {
                            diff = static_cast<int>(k);
                            ++count;
                        }
                    }
                    if (count != 1) continue;
                    int x = kids_[p][diff], y = kids_[q][diff];
                    if (!terms_[x].sort().is_int()) continue;
                    pairs.insert(std::minmax(find(x), find(y)));
                }
            }
        }
        int tests = 0;
        bool learned = false;
        for (auto [x, y] : pairs) {
            if (tests >= lim_.max_propagation_tests) break;
            ++tests;
            int vx = var_of(a, x), vy = var_of(a, y);
            auto lo = a.cs;
            lo.push_back(Ineq{{{vx, 1}, {vy, -1}}, -1});
            if (!fm_unsat(std::move(lo), lim_.max_fm_constraints)) continue;
            auto hi = a.cs;
            hi.push_back(Ineq{{{vy, 1}, {vx, -1}}, -1});
            if (!fm_unsat(std::move(hi), lim_.max_fm_constraints)) continue;
            learned |= unite(x, y);
        }
        return learned;
    }

    DecisionLimits lim_;
    std::vector<Term> terms_;
    std::vector<std::vector<int>> kids_;
    std::vector<int> parent_;
    std::unordered_map<Term, int, logic::TermHash> ids_;
    std::vector<std::pair<int, int>> diseqs_;
    std::set<std::pair<int, int>> diseq_set_;
    std::map<int, std::int64_t> lit_;
    int true_ = 0, false_ = 0, null_ = 0;
};

}  // namespace

bool is_literal(const Term& f) {
    if (f.op() == Op::Not) return is_literal(f.arg(0));
    return atom_op(f) && ground_and_flat(f);
}

bool refute(const std::vector<Term>& ante, const std::vector<Term>& succ, const DecisionLimits& limits) {
    Solver s(limits);
    for (const auto& f : ante) s.assume(f, true);
    for (const auto& f : succ) s.assume(f, false);
    return s.refute();
}

}  // namespace abside::prover
