#include "cnlkit/lpda.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <climits>
#include <unordered_map>
#include <unordered_set>

namespace cnl::lpda {

namespace {

std::string where(const Rule& r) {
    std::string s = "rule " + print_rule(r);
    if (!r.source.empty()) s += " (sentence " + r.source + ")";
    return s;
}

bool is_schema_pred(const Term& head) {
    return (head.name == "opposes" && head.args.size() == 2) || (head.name == "cancel" && head.args.size() == 1);
}

// Literal patterns in an opposes/cancel head whose variables the body may leave
// open; they range over the possible literals.
std::vector<Term> schema_patterns(const Term& head) {
    std::vector<Term> out;
    if (head.name == "opposes") {
        out.push_back(head.args[0]);
        out.push_back(head.args[1]);
    } else if (head.args[0].is_compound() && head.args[0].name == "handle" && head.args[0].args.size() == 2) {
        out.push_back(head.args[0].args[1]);
    }
    return out;
}

struct Prepared {
    const Rule* rule = nullptr;
    std::vector<Goal> goals;     // scheduled
    std::vector<Term> positive;  // body literals that become pos ids
    std::vector<Term> naf;
};

Prepared prepare(const Rule& r) {
    Prepared p;
    p.rule = &r;
    std::vector<Goal> goals;
    for (const auto& item : r.body) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
            if (lit->naf) {
                p.naf.push_back(lit->atom);
                continue;
            }
            p.positive.push_back(lit->atom);
            Goal g;
            g.atom = lit->atom;
            goals.push_back(std::move(g));
        } else {
            const auto& b = std::get<Builtin>(item);
            Goal g;
            g.lhs = b.lhs;
            g.rhs = b.rhs;
            g.op = b.op;
            g.kind = (b.op == "is" || (b.op == "=" && b.lhs.is_var())) ? Goal::Kind::assign : Goal::Kind::compare;
            if (b.op == "is" && !b.lhs.is_var())
                throw Error(Errc::unsafe_rule, where(r) + ": left side of 'is' must be a variable");
            goals.push_back(std::move(g));
        }
    }
    std::vector<std::string> body_vars;
    for (const auto& t : p.positive) t.collect_vars(body_vars);
    if (is_schema_pred(r.head)) {
        for (const auto& pat : schema_patterns(r.head)) {
            std::vector<std::string> vs;
            pat.collect_vars(vs);
            bool open = std::any_of(vs.begin(), vs.end(), [&](const std::string& v) {
                return std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end();
            });
            if (!open) continue;
            Goal g;
            g.atom = pat;
            // schema goals first so builtins over their variables can be scheduled
            goals.insert(goals.begin(), std::move(g));
        }
    }
    std::string var;
    auto s = schedule_goals(std::move(goals), {}, &var);
    if (!s) throw Error(Errc::unsafe_rule, where(r) + ": variable " + var + " is not bound by a positive literal");
    p.goals = std::move(*s);
    std::vector<std::string> bound;
    for (const auto& g : p.goals) {
        if (g.kind == Goal::Kind::atom) g.atom.collect_vars(bound);
        if (g.kind == Goal::Kind::assign) g.lhs.collect_vars(bound);
    }
    auto require = [&](const Term& t) {
        std::vector<std::string> vs;
        t.collect_vars(vs);
        for (const auto& v : vs)
            if (std::find(bound.begin(), bound.end(), v) == bound.end())
                throw Error(Errc::unsafe_rule,
                            where(r) + ": variable " + v + " is not bound by a positive literal");
    };
    require(r.head);
    for (const auto& t : p.naf) require(t);
    if (r.label) require(*r.label);
    return p;
}

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

Term fn1(const char* f, const Term& a) { return Term::fn(f, {a}); }

} // namespace

GroundProgram ground(const Program& prog) {
    GroundProgram g;
    g.source_rules = prog.rules;
    std::vector<Prepared> rules;
    for (const auto& r : g.source_rules) {
        if (r.head.is_var() || r.head.is_num()) throw Error(Errc::parse, where(r) + ": head must be a literal");
        rules.push_back(prepare(r));
    }

    AtomStore& poss = g.atoms;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : rules) {
            std::vector<Term> fresh;
            Bindings b;
            join(p.goals, poss, b, [&](const Bindings& bb) { fresh.push_back(resolve(p.rule->head, bb)); });
            for (auto& t : fresh)
                if (!poss.find(t)) {
                    poss.intern(t);
                    changed = true;
                }
        }
    }

    std::unordered_set<std::string> seen;
    std::unordered_map<std::string, int> handle_ids;
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const auto& p = rules[ri];
        Bindings b;
        std::vector<GroundRule> out;
        join(p.goals, poss, b, [&](const Bindings& bb) {
            GroundRule gr;
            gr.source = static_cast<int>(ri);
            Term head = resolve(p.rule->head, bb);
            gr.head = *poss.find(head);
            for (const auto& t : p.positive) gr.pos.push_back(*poss.find(resolve(t, bb)));
            for (const auto& t : p.naf)
                if (auto id = poss.find(resolve(t, bb))) gr.neg.push_back(*id);
            sort_unique(gr.pos);
            sort_unique(gr.neg);
            if (p.rule->label) {
                Term label = resolve(*p.rule->label, bb);
                Term h = Term::fn("handle", {label, head});
                auto key = h.key();
                auto it = handle_ids.find(key);
                if (it == handle_ids.end()) {
                    it = handle_ids.emplace(key, static_cast<int>(g.handles.size())).first;
                    g.handles.push_back({label, gr.head, h});
                }
                gr.handle = it->second;
            }
            out.push_back(std::move(gr));
        });
        for (auto& gr : out) {
            std::string k = std::to_string(gr.head) + "|" + std::to_string(gr.handle) + "|";
            for (int a : gr.pos) k += std::to_string(a) + ",";
            k += "|";
            for (int a : gr.neg) k += std::to_string(a) + ",";
            if (seen.insert(k).second) g.rules.push_back(std::move(gr));
        }
    }
    return g;
}

NormalProgram reduce_defeasible(const GroundProgram& g) {
    NormalProgram np;
    np.atoms = g.atoms;
    for (const auto& r : g.rules) {
        if (r.handle < 0) {
            np.rules.push_back({r.head, r.pos, r.neg});
            continue;
        }
        const Term& h = g.handles[static_cast<std::size_t>(r.handle)].term;
        int defeated = np.atoms.intern(fn1("$defeated", h));
        int candidate = np.atoms.intern(fn1("$candidate", h));
        auto neg = r.neg;
        neg.push_back(defeated);
        np.rules.push_back({r.head, r.pos, neg});
        np.rules.push_back({candidate, r.pos, r.neg});
    }
    return np;
}

void default_argumentation_theory(const GroundProgram& g, NormalProgram& np) {
    auto& atoms = np.atoms;
    auto add = [&](int head, std::vector<int> pos, std::vector<int> neg) {
        sort_unique(pos);
        sort_unique(neg);
        np.rules.push_back({head, std::move(pos), std::move(neg)});
    };
    const std::size_t nh = g.handles.size();
    std::vector<int> defeated(nh), candidate(nh), refuted(nh), rebutted(nh), disq(nh);
    std::unordered_map<int, std::vector<std::size_t>> by_head;
    for (std::size_t i = 0; i < nh; ++i) {
        const auto& H = g.handles[i];
        defeated[i] = atoms.intern(fn1("$defeated", H.term));
        candidate[i] = atoms.intern(fn1("$candidate", H.term));
        refuted[i] = atoms.intern(fn1("$refuted", H.term));
        rebutted[i] = atoms.intern(fn1("$rebutted", H.term));
        disq[i] = atoms.intern(fn1("$disqualified", H.term));
        add(defeated[i], {refuted[i]}, {});
        add(defeated[i], {rebutted[i]}, {});
        add(defeated[i], {disq[i]}, {});
        if (auto c = atoms.find(fn1("cancel", H.label))) add(disq[i], {*c}, {});
        if (auto c = atoms.find(fn1("cancel", H.term))) add(disq[i], {*c}, {});
        by_head[H.head].push_back(i);
    }

    // opposes: built-in A vs neg A for every defeasible head, then symmetric closure
    std::vector<int> opp;
    for (int id = 0; id < atoms.size(); ++id) {
        const Term& t = atoms.at(id);
        if (t.name == "opposes" && t.args.size() == 2 && !t.is_strong_neg()) opp.push_back(id);
    }
    std::unordered_set<int> head_atoms;
    for (const auto& H : g.handles) head_atoms.insert(H.head);
    for (int h : head_atoms) {
        const Term& a = g.atoms.at(h);
        for (const auto& t : {Term::fn("opposes", {a, Term::negate(a)}), Term::fn("opposes", {Term::negate(a), a})}) {
            bool fresh = !atoms.find(t);
            int id = atoms.intern(t);
            add(id, {}, {});
            if (fresh) opp.push_back(id);
        }
    }
    for (std::size_t k = 0, n = opp.size(); k < n; ++k) {
        Term t = atoms.at(opp[k]);
        Term rev = Term::fn("opposes", {t.args[1], t.args[0]});
        bool fresh = !atoms.find(rev);
        int id = atoms.intern(rev);
        add(id, {opp[k]}, {});
        if (fresh) opp.push_back(id);
    }

    // definite support for opposed literals, used for strict refutation
    std::unordered_map<int, std::vector<const GroundRule*>> definite;
    for (const auto& r : g.rules)
        if (r.handle < 0) definite[r.head].push_back(&r);
    std::unordered_map<int, int> strict_atom;
    auto strict_of = [&](int lit) {
        auto it = strict_atom.find(lit);
        if (it != strict_atom.end()) return it->second;
        int s = atoms.intern(fn1("$strict", g.atoms.at(lit)));
        strict_atom.emplace(lit, s);
        for (const auto* r : definite[lit]) add(s, r->pos, r->neg);
        return s;
    };

    for (int o : opp) {
        Term t = atoms.at(o);
        auto a = g.atoms.find(t.args[0]);
        auto b = g.atoms.find(t.args[1]);
        if (!a || !b) continue;
        auto h1s = by_head.find(*a);
        if (h1s == by_head.end()) continue;
        for (std::size_t i : h1s->second) {
            const Term& r1 = g.handles[i].label;
            if (auto hb = by_head.find(*b); hb != by_head.end()) {
                for (std::size_t j : hb->second) {
                    if (i == j) continue;
                    const Term& r2 = g.handles[j].label;
                    auto o21 = atoms.find(Term::fn("overrides", {r2, r1}));
                    auto o12 = atoms.find(Term::fn("overrides", {r1, r2}));
                    if (o21) add(refuted[i], {o, candidate[j], *o21}, {defeated[j]});
                    std::vector<int> neg{defeated[j]};
                    if (o12) neg.push_back(*o12);
                    if (o21) neg.push_back(*o21);
                    add(rebutted[i], {o, candidate[i], candidate[j]}, neg);
                }
            }
            if (definite.count(*b)) add(refuted[i], {o, strict_of(*b)}, {});
        }
    }
}

const char* truth_name(Truth v) { return v == Truth::t ? "true" : v == Truth::f ? "false" : "undefined"; }

namespace {

// Least model of the positive part after deleting rules blocked by `blocking`.
std::vector<char> gamma(const NormalProgram& p, const std::vector<char>& blocking,
                        const std::vector<std::vector<std::size_t>>& watch) {
    std::size_t n = static_cast<std::size_t>(p.atoms.size());
    std::vector<char> in(n, 0);
    std::vector<int> count(p.rules.size());
    std::vector<int> queue;
    auto fire = [&](int h) {
        if (!in[static_cast<std::size_t>(h)]) {
            in[static_cast<std::size_t>(h)] = 1;
            queue.push_back(h);
        }
    };
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        const auto& r = p.rules[i];
        bool blocked = std::any_of(r.neg.begin(), r.neg.end(),
                                   [&](int b) { return blocking[static_cast<std::size_t>(b)] != 0; });
        count[i] = blocked ? INT_MAX : static_cast<int>(r.pos.size());
        if (count[i] == 0) fire(r.head);
    }
    while (!queue.empty()) {
        int a = queue.back();
        queue.pop_back();
        for (std::size_t i : watch[static_cast<std::size_t>(a)])
            if (count[i] != INT_MAX && --count[i] == 0) fire(p.rules[i].head);
    }
    return in;
}

std::size_t popcount(const std::vector<char>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); }

} // namespace

Interpretation wfm(const NormalProgram& p) {
    std::size_t n = static_cast<std::size_t>(p.atoms.size());
    std::vector<std::vector<std::size_t>> watch(n);
    for (std::size_t i = 0; i < p.rules.size(); ++i)
        for (int a : p.rules[i].pos) watch[static_cast<std::size_t>(a)].push_back(i);

    Interpretation out;
    std::vector<char> truth(n, 0);
    std::vector<char> possible;
    while (true) {
        possible = gamma(p, truth, watch);
        auto next = gamma(p, possible, watch);
        out.trace.emplace_back(popcount(next), popcount(possible));
        if (next == truth) break;
        truth = std::move(next);
    }
    out.value.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.value[i] = truth[i] ? Truth::t : possible[i] ? Truth::u : Truth::f;
    for (int id = 0; id < p.atoms.size(); ++id) {
        const Term& t = p.atoms.at(id);
        if (!t.is_strong_neg() || out.value[static_cast<std::size_t>(id)] != Truth::t) continue;
        if (auto a = p.atoms.find(t.atom()); a && out.value[static_cast<std::size_t>(*a)] == Truth::t) {
            out.consistent = false;
            out.conflicts.push_back(*a);
        }
    }
    return out;
}

const char* status_name(QueryResult::Status s) {
    return s == QueryResult::Status::yes ? "yes" : s == QueryResult::Status::no ? "no" : "unknown";
}

Engine::Engine(Program p) : ground_(ground(p)) {
    normal_ = reduce_defeasible(ground_);
    default_argumentation_theory(ground_, normal_);
    model_ = wfm(normal_);
}

Truth Engine::truth(const Term& literal) const {
    auto id = normal_.atoms.find(literal);
    if (!id) return Truth::f;
    return model_.value[static_cast<std::size_t>(*id)];
}

std::vector<Provenance> Engine::support(int atom) const {
    std::vector<Provenance> out;
    auto val = [&](int a) { return model_.value[static_cast<std::size_t>(a)]; };
    for (const auto& r : ground_.rules) {
        if (r.head != atom) continue;
        if (!std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return val(a) == Truth::t; })) continue;
        if (!std::all_of(r.neg.begin(), r.neg.end(), [&](int a) { return val(a) == Truth::f; })) continue;
        Provenance pv;
        if (r.handle >= 0) {
            const auto& h = ground_.handles[static_cast<std::size_t>(r.handle)];
            if (truth(fn1("$defeated", h.term)) != Truth::f) continue;
            pv.label = print_term(h.label);
        }
        pv.source = ground_.source_rules[static_cast<std::size_t>(r.source)].source;
        if (std::none_of(out.begin(), out.end(),
                         [&](const Provenance& q) { return q.label == pv.label && q.source == pv.source; }))
            out.push_back(std::move(pv));
    }
    return out;
}

QueryResult Engine::query(const std::vector<BodyItem>& goal) const {
    QueryResult res;
    res.inconsistent = !model_.consistent;

    // candidate atoms: everything not false
    AtomStore live;
    for (int id = 0; id < ground_.atoms.size(); ++id)
        if (model_.value[static_cast<std::size_t>(id)] != Truth::f) live.intern(ground_.atoms.at(id));

    std::vector<Goal> goals;
    std::vector<std::pair<Term, bool>> lits;
    std::vector<std::string> vars;
    for (const auto& item : goal) {
        if (const auto* lit = std::get_if<Literal>(&item)) {
            lit->atom.collect_vars(vars);
            lits.emplace_back(lit->atom, lit->naf);
            if (lit->naf) continue;
            Goal g;
            g.atom = lit->atom;
            goals.push_back(std::move(g));
        } else {
            const auto& b = std::get<Builtin>(item);
            Goal g;
            g.lhs = b.lhs;
            g.rhs = b.rhs;
            g.op = b.op;
            g.kind = (b.op == "is" || (b.op == "=" && b.lhs.is_var())) ? Goal::Kind::assign : Goal::Kind::compare;
            b.lhs.collect_vars(vars);
            goals.push_back(std::move(g));
        }
    }
    std::string bad;
    auto sched = schedule_goals(goals, {}, &bad);
    if (!sched) throw Error(Errc::unsafe_rule, "query variable " + bad + " is not bound by a positive literal");
    for (const auto& [t, naf] : lits) {
        if (!naf) continue;
        std::vector<std::string> vs;
        t.collect_vars(vs);
        for (const auto& v : vs) {
            bool ok = std::any_of(sched->begin(), sched->end(), [&](const Goal& g) {
                std::vector<std::string> gv;
                if (g.kind == Goal::Kind::atom) g.atom.collect_vars(gv);
                return std::find(gv.begin(), gv.end(), v) != gv.end();
            });
            if (!ok) throw Error(Errc::unsafe_rule, "query variable " + v + " is not bound by a positive literal");
        }
    }
    vars.erase(std::remove_if(vars.begin(), vars.end(), [](const std::string& v) { return v.rfind("?_", 0) == 0; }),
               vars.end());
    res.ground = vars.empty();

    bool any_true = false, any_undef = false;
    Bindings b;
    join(*sched, live, b, [&](const Bindings& bb) {
        Truth combined = Truth::t;
        for (const auto& [t, naf] : lits) {
            Truth v = truth(resolve(t, bb));
            if (naf) v = v == Truth::t ? Truth::f : v == Truth::f ? Truth::t : Truth::u;
            if (v == Truth::f) combined = Truth::f;
            else if (v == Truth::u && combined == Truth::t) combined = Truth::u;
        }
        if (combined == Truth::u) {
            any_undef = true;
            ++res.undefined_instances;
        }
        if (combined != Truth::t) return;
        any_true = true;
        std::vector<Provenance> prov;
        for (const auto& [t, naf] : lits) {
            if (naf) continue;
            if (auto id = ground_.atoms.find(resolve(t, bb)))
                for (auto& pv : support(*id)) prov.push_back(std::move(pv));
        }
        if (!res.ground) {
            std::map<std::string, Term> ans;
            for (const auto& v : vars) ans.emplace(v.substr(v[0] == '?' ? 1 : 0), *bb.get(v));
            if (std::find(res.answers.begin(), res.answers.end(), ans) != res.answers.end()) return;
            res.answers.push_back(std::move(ans));
        }
        res.provenance.push_back(std::move(prov));
    });
    if (any_true) res.status = QueryResult::Status::yes;
    else if (any_undef) res.status = QueryResult::Status::unknown;
    else res.status = QueryResult::Status::no;
    return res;
}

std::string Engine::dump() const {
    std::vector<Term> sections[3];
    for (int id = 0; id < ground_.atoms.size(); ++id) {
        auto v = model_.value[static_cast<std::size_t>(id)];
        sections[v == Truth::t ? 0 : v == Truth::f ? 1 : 2].push_back(ground_.atoms.at(id));
    }
    std::string s;
    const char* names[] = {"T:", "F:", "U:"};
    for (int k = 0; k < 3; ++k) {
        std::sort(sections[k].begin(), sections[k].end());
        s += names[k];
        s += '\n';
        for (const auto& t : sections[k]) s += "  " + print_term(t) + "\n";
    }
    if (!model_.consistent) s += "% inconsistent\n";
    return s;
}

} // namespace cnl::lpda
