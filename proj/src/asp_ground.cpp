#include "cnlkit/asp.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace cnl::asp {

namespace {

std::string where(const Rule& r) { return "rule at line " + std::to_string(r.line); }

std::vector<Goal> positive_goals(const std::vector<BodyItem>& body) {
    std::vector<Goal> out;
    for (const auto& item : body) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
            if (lit->naf) continue;
            Goal g;
            g.atom = lit->atom;
            out.push_back(std::move(g));
        } else {
            const auto& b = std::get<Builtin>(item);
            Goal g;
            g.lhs = b.lhs;
            g.rhs = b.rhs;
            g.op = b.op;
            // `X = expr` binds X when it is not yet bound
            g.kind = (b.op == "=" && b.lhs.is_var()) ? Goal::Kind::assign : Goal::Kind::compare;
            out.push_back(std::move(g));
        }
    }
    return out;
}

std::vector<Goal> schedule(const Rule& r, std::vector<Goal> goals, std::vector<std::string> prebound) {
    std::string var;
    auto s = schedule_goals(std::move(goals), std::move(prebound), &var);
    if (!s) throw Error(Errc::unsafe_rule, where(r) + ": variable " + var + " is unsafe");
    return *s;
}

std::vector<std::string> bound_by(const std::vector<Goal>& goals, std::vector<std::string> acc) {
    for (const auto& g : goals) {
        if (g.kind == Goal::Kind::atom) g.atom.collect_vars(acc);
        if (g.kind == Goal::Kind::assign) g.lhs.collect_vars(acc);
    }
    return acc;
}

void require_bound(const Rule& r, const Term& t, const std::vector<std::string>& bound) {
    std::vector<std::string> vs;
    t.collect_vars(vs);
    for (const auto& v : vs)
        if (std::find(bound.begin(), bound.end(), v) == bound.end())
            throw Error(Errc::unsafe_rule, where(r) + ": variable " + v + " is unsafe");
}

std::vector<Term> naf_atoms(const std::vector<BodyItem>& body) {
    std::vector<Term> out;
    for (const auto& item : body)
        if (const auto* lit = std::get_if<Literal>(&item); lit && lit->naf) out.push_back(lit->atom);
    return out;
}

struct Prepared {
    const Rule* rule;
    std::vector<Goal> body;
    std::vector<Term> naf;
    std::vector<std::vector<Goal>> cond;  // per choice element
    std::vector<std::vector<Term>> cond_naf;
};

Prepared prepare(const Rule& r) {
    Prepared p;
    p.rule = &r;
    p.body = schedule(r, positive_goals(r.body), {});
    auto bound = bound_by(p.body, {});
    p.naf = naf_atoms(r.body);
    for (const auto& t : p.naf) require_bound(r, t, bound);
    for (const auto& h : r.head) require_bound(r, h, bound);
    if (r.lower) require_bound(r, *r.lower, bound);
    if (r.upper) require_bound(r, *r.upper, bound);
    for (const auto& e : r.elements) {
        auto goals = schedule(r, positive_goals(e.condition), bound);
        auto inner = bound_by(goals, bound);
        require_bound(r, e.atom, inner);
        auto naf = naf_atoms(e.condition);
        for (const auto& t : naf) require_bound(r, t, inner);
        p.cond.push_back(std::move(goals));
        p.cond_naf.push_back(std::move(naf));
    }
    return p;
}

int bound_int(const Rule& r, const std::optional<Term>& t, const Bindings& b, int dflt) {
    if (!t) return dflt;
    Term v = resolve(*t, b);
    if (!v.is_num() || !v.value.is_integer() || v.value.numerator() < 0)
        throw Error(Errc::parse, where(r) + ": choice bound must be a non-negative integer");
    return static_cast<int>(v.value.numerator());
}

std::string rule_key(const GroundRule& g) {
    std::string k = std::to_string(static_cast<int>(g.kind)) + ":" + std::to_string(g.head) + ":" +
                    std::to_string(g.lower) + ":" + std::to_string(g.upper) + "|";
    for (int h : g.choice_heads) k += std::to_string(h) + ",";
    k += "|";
    for (int a : g.pos) k += std::to_string(a) + ",";
    k += "|";
    for (int a : g.neg) k += std::to_string(a) + ",";
    return k;
}

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

GroundProgram ground(const Program& prog) {
    std::vector<Prepared> rules;
    rules.reserve(prog.rules.size());
    for (const auto& r : prog.rules) {
        if (r.head.size() > 1)
            throw Error(Errc::unsupported, where(r) + ": disjunctive heads are not supported by the solver");
        rules.push_back(prepare(r));
    }

    // Possible atoms: least fixpoint ignoring negation.
    AtomStore poss;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : rules) {
            const Rule& r = *p.rule;
            if (r.kind == Rule::Kind::constraint) continue;
            std::vector<Term> fresh;
            Bindings b;
            join(p.body, poss, b, [&](const Bindings& bb) {
                if (r.kind != Rule::Kind::choice) {
                    fresh.push_back(resolve(r.head[0], bb));
                    return;
                }
                for (std::size_t k = 0; k < r.elements.size(); ++k) {
                    Bindings inner = bb;
                    join(p.cond[k], poss, inner,
                         [&](const Bindings& ib) { fresh.push_back(resolve(r.elements[k].atom, ib)); });
                }
            });
            for (const auto& t : fresh)
                if (!poss.find(t)) {
                    poss.intern(t);
                    changed = true;
                }
        }
    }

    GroundProgram g;
    std::unordered_set<std::string> seen;
    auto add = [&](GroundRule gr) {
        sort_unique(gr.pos);
        sort_unique(gr.neg);
        if (seen.insert(rule_key(gr)).second) g.rules.push_back(std::move(gr));
    };
    auto body_ids = [&](const Prepared& p, const Bindings& b, GroundRule& gr) {
        for (const auto& goal : p.body)
            if (goal.kind == Goal::Kind::atom) gr.pos.push_back(*poss.find(resolve(goal.atom, b)));
        for (const auto& t : p.naf)
            if (auto id = poss.find(resolve(t, b))) gr.neg.push_back(*id);
    };

    for (const auto& p : rules) {
        const Rule& r = *p.rule;
        if (r.kind == Rule::Kind::choice) continue;
        Bindings b;
        join(p.body, poss, b, [&](const Bindings& bb) {
            GroundRule gr;
            if (r.kind == Rule::Kind::constraint) {
                gr.kind = GroundRule::Kind::constraint;
            } else {
                gr.head = *poss.find(resolve(r.head[0], bb));
            }
            body_ids(p, bb, gr);
            add(std::move(gr));
        });
    }

    // Atoms derivable without any choice or negation; choice conditions must
    // range over these so that element sets are fixed before the search.
    std::vector<PositiveRule> definite;
    for (const auto& gr : g.rules)
        if (gr.kind == GroundRule::Kind::normal && gr.neg.empty()) definite.push_back({gr.head, gr.pos});
    auto certain = least_model(definite);

    for (const auto& p : rules) {
        const Rule& r = *p.rule;
        if (r.kind != Rule::Kind::choice) continue;
        Bindings b;
        join(p.body, poss, b, [&](const Bindings& bb) {
            GroundRule gr;
            gr.kind = GroundRule::Kind::choice;
            gr.lower = bound_int(r, r.lower, bb, 0);
            gr.upper = bound_int(r, r.upper, bb, -1);
            if (gr.upper >= 0 && gr.lower > gr.upper)
                throw Error(Errc::parse, where(r) + ": choice lower bound exceeds upper bound");
            for (std::size_t k = 0; k < r.elements.size(); ++k) {
                Bindings inner = bb;
                join(p.cond[k], poss, inner, [&](const Bindings& ib) {
                    for (const auto& goal : p.cond[k])
                        if (goal.kind == Goal::Kind::atom && !certain.count(*poss.find(resolve(goal.atom, ib))))
                            throw Error(Errc::unsupported,
                                        where(r) + ": choice condition " + resolve(goal.atom, ib).str() +
                                            " is not a domain fact");
                    for (const auto& t : p.cond_naf[k])
                        if (poss.find(resolve(t, ib)))
                            throw Error(Errc::unsupported,
                                        where(r) + ": negated choice condition " + resolve(t, ib).str() +
                                            " is not decided by facts");
                    gr.choice_heads.push_back(*poss.find(resolve(r.elements[k].atom, ib)));
                });
            }
            sort_unique(gr.choice_heads);
            body_ids(p, bb, gr);
            add(std::move(gr));
        });
    }

    for (int id = 0; id < poss.size(); ++id) {
        const Term& t = poss.at(id);
        if (!t.is_strong_neg()) continue;
        if (auto pos = poss.find(t.atom())) {
            GroundRule gr;
            gr.kind = GroundRule::Kind::constraint;
            gr.pos = {*pos, id};
            add(std::move(gr));
        }
    }

    g.atoms = std::move(poss);
    g.shows = prog.shows;
    g.hide = prog.hide;
    return g;
}

} // namespace cnl::asp
