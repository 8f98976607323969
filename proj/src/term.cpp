#include "cnlkit/term.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>

namespace cnl {

namespace {

bool arith_functor(const std::string& f, std::size_t arity) {
    return arity == 2 && (f == "+" || f == "-" || f == "*" || f == "/");
}

int kind_rank(Term::Kind k) {
    switch (k) {
    case Term::Kind::variable: return 0;
    case Term::Kind::number: return 1;
    case Term::Kind::symbol: return 2;
    case Term::Kind::compound: return 3;
    }
    return 4;
}

} // namespace

Term Term::sym(std::string s) {
    Term t;
    t.kind = Kind::symbol;
    t.name = std::move(s);
    return t;
}

Term Term::num(Decimal d) {
    Term t;
    t.kind = Kind::number;
    t.value = d;
    return t;
}

Term Term::var(std::string v) {
    Term t;
    t.kind = Kind::variable;
    t.name = std::move(v);
    return t;
}

Term Term::fn(std::string f, std::vector<Term> a) {
    if (a.empty()) return sym(std::move(f));
    Term t;
    t.kind = Kind::compound;
    t.name = std::move(f);
    t.args = std::move(a);
    return t;
}

Term Term::negate(Term atom) {
    if (atom.is_strong_neg()) return std::move(atom.args[0]);
    return fn("-", {std::move(atom)});
}

bool Term::is_arith() const { return kind == Kind::compound && arith_functor(name, args.size()); }

bool Term::ground() const {
    if (kind == Kind::variable) return false;
    for (const auto& a : args)
        if (!a.ground()) return false;
    return true;
}

std::string Term::pred_key() const {
    if (is_strong_neg()) return "-" + args[0].pred_key();
    return name + "/" + std::to_string(args.size());
}

std::string Term::key() const {
    switch (kind) {
    case Kind::number:
        return "#n" + std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
    case Kind::variable:
        return "?" + name;
    case Kind::symbol:
        return name;
    case Kind::compound: {
        std::string s = name + "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) s += ',';
            s += args[i].key();
        }
        return s + ")";
    }
    }
    return {};
}

std::string Term::str(bool neg_word) const {
    switch (kind) {
    case Kind::number: return value.str();
    case Kind::variable:
    case Kind::symbol: return name;
    case Kind::compound: break;
    }
    if (is_strong_neg()) return (neg_word ? "neg " : "-") + args[0].str(neg_word);
    if (is_arith()) return args[0].str(neg_word) + name + args[1].str(neg_word);
    std::string s = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ',';
        s += args[i].str(neg_word);
    }
    return s + ")";
}

void Term::collect_vars(std::vector<std::string>& out) const {
    if (kind == Kind::variable) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        return;
    }
    for (const auto& a : args) a.collect_vars(out);
}

bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Term::Kind::number) return a.value == b.value;
    return a.name == b.name && a.args == b.args;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.kind != b.kind) return kind_rank(a.kind) <=> kind_rank(b.kind);
    if (a.kind == Term::Kind::number) return a.value <=> b.value;
    if (a.kind == Term::Kind::compound) {
        if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
        if (auto c = a.name <=> b.name; c != 0) return c;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    return a.name <=> b.name;
}

const Term* Bindings::get(const std::string& v) const {
    for (auto it = items_.rbegin(); it != items_.rend(); ++it)
        if (it->first == v) return &it->second;
    return nullptr;
}

Term substitute(const Term& t, const Bindings& b) {
    if (t.kind == Term::Kind::variable) {
        if (const Term* v = b.get(t.name)) return *v;
        return t;
    }
    if (t.args.empty()) return t;
    Term r = t;
    for (auto& a : r.args) a = substitute(a, b);
    return r;
}

Term resolve(const Term& t, const Bindings& b) {
    Term r = substitute(t, b);
    if (r.is_arith() && r.ground()) return evaluate(r, Bindings{});
    if (r.kind == Term::Kind::compound)
        for (auto& a : r.args)
            if (a.is_arith() && a.ground()) a = evaluate(a, Bindings{});
    return r;
}

bool match(const Term& p, const Term& g, Bindings& b) {
    switch (p.kind) {
    case Term::Kind::variable: {
        if (const Term* v = b.get(p.name)) return *v == g;
        b.set(p.name, g);
        return true;
    }
    case Term::Kind::number:
    case Term::Kind::symbol:
        return p == g;
    case Term::Kind::compound:
        break;
    }
    if (p.is_arith()) {
        Term v = substitute(p, b);
        if (!v.ground()) return false;
        return evaluate(v, b) == g;
    }
    if (g.kind != Term::Kind::compound || g.name != p.name || g.args.size() != p.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
        if (!match(p.args[i], g.args[i], b)) return false;
    return true;
}

Term evaluate(const Term& t, const Bindings& b) {
    switch (t.kind) {
    case Term::Kind::number:
    case Term::Kind::symbol:
        return t;
    case Term::Kind::variable: {
        const Term* v = b.get(t.name);
        if (!v) throw Error(Errc::arithmetic, "unbound variable " + t.name + " in arithmetic");
        return *v;
    }
    case Term::Kind::compound:
        break;
    }
    if (!t.is_arith()) return substitute(t, b);
    Term l = evaluate(t.args[0], b);
    Term r = evaluate(t.args[1], b);
    if (!l.is_num() || !r.is_num())
        throw Error(Errc::arithmetic, "non-numeric operand in " + t.str());
    const std::string& f = t.name;
    if (f == "+") return Term::num(l.value + r.value);
    if (f == "-") return Term::num(l.value - r.value);
    if (f == "*") return Term::num(l.value * r.value);
    return Term::num(l.value / r.value);
}

bool is_compare_op(const std::string& op) {
    return op == "=" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=";
}

bool compare_op(const std::string& op, const Term& a, const Term& b) {
    auto c = a <=> b;
    if (op == "=") return c == 0;
    if (op == "!=") return c != 0;
    if (op == "<") return c < 0;
    if (op == "<=") return c <= 0;
    if (op == ">") return c > 0;
    if (op == ">=") return c >= 0;
    throw Error(Errc::parse, "unknown comparison " + op);
}

int AtomStore::intern(const Term& t) {
    auto k = t.key();
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    ids_.emplace(std::move(k), id);
    atoms_.push_back(t);
    by_pred_[t.pred_key()].push_back(id);
    return id;
}

std::optional<int> AtomStore::find(const Term& t) const {
    auto it = ids_.find(t.key());
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::vector<int>& AtomStore::of_pred(const std::string& key) const {
    static const std::vector<int> none;
    auto it = by_pred_.find(key);
    return it == by_pred_.end() ? none : it->second;
}

std::optional<std::vector<Goal>> schedule_goals(std::vector<Goal> goals, std::vector<std::string> bound,
                                                std::string* unbound_var) {
    std::vector<Goal> out;
    std::vector<Goal> pending;
    auto inputs_bound = [&](const Goal& g) {
        std::vector<std::string> vs;
        if (g.kind == Goal::Kind::assign) {
            g.rhs.collect_vars(vs);
        } else {
            g.lhs.collect_vars(vs);
            g.rhs.collect_vars(vs);
        }
        for (const auto& v : vs)
            if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
                if (unbound_var) *unbound_var = v;
                return false;
            }
        return true;
    };
    auto flush = [&] {
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto it = pending.begin(); it != pending.end(); ++it) {
                if (!inputs_bound(*it)) continue;
                if (it->kind == Goal::Kind::assign) it->lhs.collect_vars(bound);
                out.push_back(std::move(*it));
                pending.erase(it);
                progress = true;
                break;
            }
        }
    };
    for (auto& g : goals) {
        if (g.kind == Goal::Kind::atom) {
            g.atom.collect_vars(bound);
            out.push_back(std::move(g));
        } else {
            pending.push_back(std::move(g));
        }
        flush();
    }
    flush();
    if (!pending.empty()) {
        inputs_bound(pending.front());
        return std::nullopt;
    }
    return out;
}

namespace {

void join_from(const std::vector<Goal>& goals, std::size_t i, const AtomStore& store, Bindings& b,
               const std::function<void(const Bindings&)>& emit) {
    if (i == goals.size()) {
        emit(b);
        return;
    }
    const Goal& g = goals[i];
    switch (g.kind) {
    case Goal::Kind::atom: {
        Term pat = substitute(g.atom, b);
        if (pat.ground()) {
            if (pat.is_arith() || !pat.args.empty()) pat = resolve(pat, Bindings{});
            if (store.find(pat)) join_from(goals, i + 1, store, b, emit);
            return;
        }
        for (int id : store.of_pred(pat.pred_key())) {
            auto m = b.mark();
            if (match(pat, store.at(id), b)) join_from(goals, i + 1, store, b, emit);
            b.undo(m);
        }
        return;
    }
    case Goal::Kind::compare: {
        if (compare_op(g.op, evaluate(g.lhs, b), evaluate(g.rhs, b))) join_from(goals, i + 1, store, b, emit);
        return;
    }
    case Goal::Kind::assign: {
        Term v = evaluate(g.rhs, b);
        auto m = b.mark();
        if (match(substitute(g.lhs, b), v, b)) join_from(goals, i + 1, store, b, emit);
        b.undo(m);
        return;
    }
    }
}

} // namespace

void join(const std::vector<Goal>& goals, const AtomStore& store, Bindings& b,
          const std::function<void(const Bindings&)>& emit) {
    join_from(goals, 0, store, b, emit);
}

} // namespace cnl
