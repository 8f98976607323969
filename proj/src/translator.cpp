#include "cnlkit/translator.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace cnl {

using lpda::BodyItem;
using lpda::Builtin;
using lpda::Literal;
using lpda::print_term;
using lpda::Rule;

void ScaleTable::add(std::vector<std::string> scale) {
    if (scale.size() < 2) throw Error(Errc::validation, "a scale needs at least two symbols");
    std::set<std::string> seen;
    for (const auto& s : scale) {
        if (!seen.insert(s).second) throw Error(Errc::validation, "symbol '" + s + "' repeated within a scale");
        if (find(s)) throw Error(Errc::validation, "symbol '" + s + "' already belongs to another scale");
    }
    scales_.push_back(std::move(scale));
}

const std::vector<std::string>* ScaleTable::find(const std::string& sym, std::size_t* pos) const {
    for (const auto& sc : scales_) {
        auto it = std::find(sc.begin(), sc.end(), sym);
        if (it == sc.end()) continue;
        if (pos) *pos = static_cast<std::size_t>(it - sc.begin());
        return &sc;
    }
    return nullptr;
}

ScaleTable load_scales(std::string_view text) {
    ScaleTable t;
    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto pct = line.find('%'); pct != std::string::npos) line.resize(pct);
        line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
                   line.end());
        if (line.empty()) continue;
        if (!line.starts_with("scale(") || !line.ends_with(").")) {
            throw Error(Errc::parse, "scales line " + std::to_string(line_no) + ": expected scale(a, b, ...).");
        }
        std::string inner = line.substr(6, line.size() - 8);
        std::vector<std::string> syms;
        std::stringstream ss(inner);
        for (std::string s; std::getline(ss, s, ',');) syms.push_back(s);
        t.add(std::move(syms));
    }
    return t;
}

ScaleTable load_scales_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open scales " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scales(ss.str());
}

namespace {

Term fn(std::string name, std::vector<Term> args) { return Term::fn(std::move(name), std::move(args)); }

Term negate(const Term& t) { return t.is_strong_neg() ? t.args[0] : Term::negate(t); }

Rule fact(Term head, std::string source, std::optional<std::string> label = std::nullopt) {
    Rule r;
    r.head = std::move(head);
    r.source = std::move(source);
    if (label) r.label = Term::sym(*label);
    return r;
}

bool is_var_term(const Term& t) { return t.kind == Term::Kind::variable; }

Term rename_vars(const Term& t, const std::function<std::string(const std::string&)>& f) {
    if (t.is_var()) return Term::var(f(t.name));
    if (!t.is_compound()) return t;
    Term c = t;
    for (auto& a : c.args) a = rename_vars(a, f);
    return c;
}

Term replace_var(const Term& t, const std::string& v, const Term& by) {
    if (t.is_var()) return t.name == v ? by : t;
    if (!t.is_compound()) return t;
    Term c = t;
    for (auto& a : c.args) a = replace_var(a, v, by);
    return c;
}

// Terms for the referents of one sentence plus the builtins its head needs.
class Scope {
public:
    explicit Scope(const Discourse& d) : d_(&d) {}

    const Discourse& discourse() const { return *d_; }

    Term var_for(const std::string& label) {
        if (auto it = bound_.find(label); it != bound_.end()) return it->second;
        const Referent* r = d_->find(label);
        std::string base = r && !r->noun.empty() ? r->noun : "X";
        base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
        Term v = Term::var(unique("?" + base));
        bound_[label] = v;
        return v;
    }
    std::string unique(const std::string& base) {
        std::string name = base;
        for (int k = 2; !names_.insert(name).second; ++k) name = base + std::to_string(k);
        return name;
    }
    void bind(const std::string& label, Term t) { bound_[label] = std::move(t); }
    bool is_bound(const std::string& label) const { return bound_.count(label) > 0; }

    Term term(const std::string& arg) const {
        if (auto it = bound_.find(arg); it != bound_.end()) return it->second;
        if (const Referent* r = d_->find(arg)) return Term::sym(r->name.empty() ? r->noun : r->name);
        if (auto dec = Decimal::parse(arg)) return Term::num(*dec);
        return Term::sym(arg);
    }

    std::vector<BodyItem> builtins;

private:
    const Discourse* d_;
    std::map<std::string, Term> bound_;
    std::set<std::string> names_;
};

enum class Role { body, head, fact, query };

struct Event {
    std::string verb, subj, obj;
    std::vector<std::pair<std::string, std::string>> pps;
};

bool is_number_arg(const Scope& s, const std::string& a) {
    return !s.discourse().find(a) && Decimal::parse(a).has_value();
}

bool relational(const Scope& s, const Event& e) {
    if (e.verb != "get" || e.obj.empty()) return false;
    const Referent* o = s.discourse().find(e.obj);
    if (!o || !o->name.empty() || o->noun.empty()) return false;
    return o->quant == "a" || o->quant == "one" || o->quant == "howmuch" || o->quant == "leq1";
}

std::vector<Term> literals(const Drs& box, Role role, Scope& s);

Term event_literal(const Event& e, Role role, Scope& s) {
    std::vector<Term> args{s.term(e.subj)};
    std::string pred = e.verb;
    std::vector<Term> numbers;
    auto number = [&](const std::string& a) {
        Term n = s.term(a);
        if (role != Role::head) return n;
        // rule heads carry values through a bound variable
        Term v = Term::var(s.unique("?Amount"));
        s.builtins.push_back(Builtin{"is", v, n});
        return v;
    };
    if (relational(s, e)) {
        const Referent* o = s.discourse().find(e.obj);
        pred = o->noun;
        for (const auto& [prep, a] : e.pps)
            if (!is_number_arg(s, a)) args.push_back(s.term(a));
        for (const auto& [prep, a] : e.pps)
            if (is_number_arg(s, a)) numbers.push_back(number(a));
        if (o->quant == "howmuch" && numbers.empty()) numbers.push_back(Term::var(s.unique("?Amount")));
        for (auto& n : numbers) args.push_back(std::move(n));
        return fn(pred, std::move(args));
    }
    if (!e.obj.empty()) args.push_back(s.term(e.obj));
    for (const auto& [prep, a] : e.pps) args.push_back(is_number_arg(s, a) ? number(a) : s.term(a));
    return fn(pred, std::move(args));
}

std::vector<Term> literals(const Drs& box, Role role, Scope& s) {
    std::map<std::string, Event> events;
    std::set<std::string> consumed;
    for (const auto& k : box.conditions) {
        if (k.op != Condition::Op::simple) continue;
        if (k.pred == "predicate") {
            Event& e = events[k.args[0]];
            e.verb = k.args[1];
            e.subj = k.args[2];
            if (k.args.size() > 3) e.obj = k.args[3];
            if (e.verb == "be") {
                consumed.insert(e.obj);
                s.bind(e.obj, s.term(e.subj));  // the predicative noun denotes the subject
            }
        } else if (k.pred == "modifier_pp") {
            events[k.args[0]].pps.emplace_back(k.args[1], k.args[2]);
        }
    }
    for (const auto& [label, e] : events)
        if (relational(s, e)) consumed.insert(e.obj);

    std::vector<Term> out;
    for (const auto& k : box.conditions) {
        switch (k.op) {
        case Condition::Op::simple:
            if (k.pred == "object") {
                const Referent* r = s.discourse().find(k.args[0]);
                if (!r || !r->name.empty() || consumed.count(k.args[0]) || !s.is_bound(k.args[0])) break;
                Term t = s.term(k.args[0]);
                if (role == Role::body ? is_var_term(t) : (role == Role::fact && !is_var_term(t)))
                    out.push_back(fn(k.args[1], {t}));
            } else if (k.pred == "property") {
                out.push_back(fn(k.args[1], {s.term(k.args[0])}));
            } else if (k.pred == "predicate") {
                const Event& e = events[k.args[0]];
                if (e.verb == "be") {
                    const Referent* y = s.discourse().find(e.obj);
                    out.push_back(fn(y->noun, {s.term(e.subj)}));
                } else {
                    out.push_back(event_literal(e, role, s));
                }
            }
            break;
        case Condition::Op::neg:
            for (const auto& t : literals(k.boxes[0], role, s)) out.push_back(negate(t));
            break;
        default:
            throw Error(Errc::unsupported, std::string("nested ") + op_name(k.op) + " condition in sentence " +
                                               std::to_string(k.sentence));
        }
    }
    return out;
}

void bind_objects(const Drs& box, Scope& s) {
    for (const auto& label : box.universe) {
        const Referent* r = s.discourse().find(label);
        if (r && r->sort == Referent::Sort::object && r->name.empty()) s.var_for(label);
    }
}

// Subject of the first predication in a box (used to tie cancel heads to premises).
std::optional<std::string> premise_subject(const Drs& box) {
    for (const auto& k : box.conditions) {
        if (k.op != Condition::Op::simple) continue;
        if (k.pred == "property") return k.args[0];
        if (k.pred == "predicate") return k.args[2];
    }
    return std::nullopt;
}

class Translator {
public:
    Translator(const Document& doc, const ScaleTable& scales) : doc_(doc), scales_(scales) {}

    Translation run() {
        for (const auto& rec : doc_.records) sentence(rec);
        for (const auto* rec : limits_) limit(*rec);
        out_.program = overrides_closure(std::move(out_.program));
        return std::move(out_);
    }

private:
    void emit(Rule r) {
        if (r.label) heads_[print_term(*r.label)].push_back(r.head);
        out_.program.rules.push_back(std::move(r));
    }

    std::optional<std::string> label_for(const SentenceRecord& rec, const char* prefix, int& counter) {
        if (rec.mode == SentenceRecord::Mode::strict) return std::nullopt;
        std::string l = prefix + std::to_string(++counter);
        label_of_[rec.id] = l;
        out_.label_source[l] = rec.id;
        return l;
    }

    void sentence(const SentenceRecord& rec) {
        if (rec.form == "limit") {
            limits_.push_back(&rec);
            return;
        }
        if (rec.mode == SentenceRecord::Mode::conflict_constraint)
            throw Error(Errc::unsupported, "sentence " + rec.id + ": conflict constraints take the form '... at most one ...'");
        const auto& root = doc_.discourse.root;
        std::vector<const Condition*> frag;
        for (std::size_t i = rec.cond_begin; i < rec.cond_end; ++i) {
            const auto& k = root.conditions[i];
            if (k.op == Condition::Op::simple && k.pred == "object" && k.args[2] == "named") continue;
            frag.push_back(&k);
        }
        const Condition* complex = nullptr;
        for (const auto* k : frag)
            if (k->op == Condition::Op::impl || k->op == Condition::Op::dflt) complex = k;
        if (complex && frag.size() != 1)
            throw Error(Errc::unsupported, "sentence " + rec.id + ": mixes a conditional with other statements");

        if (rec.form == "cancel") cancel(rec, *complex);
        else if (complex) rule(rec, *complex);
        else facts(rec, frag);
        if (rec.exception) exception(rec);
    }

    void rule(const SentenceRecord& rec, const Condition& k) {
        Scope s(doc_.discourse);
        bind_objects(k.boxes[0], s);
        auto body_lits = literals(k.boxes[0], Role::body, s);
        auto heads = literals(k.boxes[1], Role::head, s);
        if (heads.empty()) throw Error(Errc::validation, "sentence " + rec.id + ": conditional has no conclusion");
        std::vector<BodyItem> body;
        for (auto& t : body_lits) body.push_back(Literal{std::move(t), false});
        for (auto& b : s.builtins) body.push_back(b);
        scale_notice(rec, k.boxes[0]);
        auto label = label_for(rec, "r", rules_);
        for (auto& h : heads) {
            Rule r;
            if (label) r.label = Term::sym(*label);
            r.head = std::move(h);
            r.body = body;
            r.source = rec.id;
            emit(std::move(r));
        }
    }

    void scale_notice(const SentenceRecord& rec, const Drs& ante) {
        for (const auto& label : ante.universe) {
            const Referent* r = doc_.discourse.find(label);
            std::size_t pos = 0;
            if (r && scales_.find(r->quant, &pos) && pos + 1 == scales_.find(r->quant)->size())
                out_.notices.push_back("sentence " + rec.id + ": '" + r->quant + "' is the top of its scale; no implicature");
        }
    }

    void facts(const SentenceRecord& rec, const std::vector<const Condition*>& frag) {
        Drs box;
        for (const auto* k : frag) {
            if (k->op == Condition::Op::disj) {
                disjunction(rec, *k);
                continue;
            }
            box.conditions.push_back(*k);
        }
        if (box.conditions.empty()) return;

        // quantifier scale: "some" subject gets Skolem witnesses plus a "not all" implicature
        for (const auto& k : box.conditions) {
            if (k.op != Condition::Op::simple || k.pred != "object") continue;
            const Referent* r = doc_.discourse.find(k.args[0]);
            std::size_t pos = 0;
            const auto* scale = r ? scales_.find(r->quant, &pos) : nullptr;
            if (!scale || pos + 1 == scale->size()) continue;
            quantifier_implicature(rec, box, r->label);
            return;
        }

        Scope s(doc_.discourse);
        auto lits = literals(box, Role::fact, s);
        auto label = label_for(rec, "f", facts_);
        for (const auto& t : lits) emit(fact(t, rec.id, label));
        for (const auto& t : lits) predicate_implicature(rec, t);
    }

    void quantifier_implicature(const SentenceRecord& rec, const Drs& box, const std::string& subject) {
        Scope s(doc_.discourse);
        s.bind(subject, Term::sym(gen_.fresh()));
        for (const auto& t : literals(box, Role::fact, s)) emit(fact(t, rec.id));
        Scope alt(doc_.discourse);
        alt.bind(subject, Term::sym(gen_.fresh()));
        const std::string noun = doc_.discourse.find(subject)->noun;
        std::string l = "imp" + std::to_string(++imps_);
        out_.label_source[l] = rec.id;
        for (const auto& t : literals(box, Role::fact, alt)) {
            if (t.name == noun && t.args.size() == 1) emit(fact(t, rec.id));
            else emit(fact(negate(t), rec.id, l));
        }
    }

    void predicate_implicature(const SentenceRecord& rec, const Term& t) {
        if (t.is_strong_neg() || t.args.size() != 1) return;
        std::size_t pos = 0;
        const auto* scale = scales_.find(t.name, &pos);
        if (!scale) return;
        if (emitted_scales_.insert(scale).second) {
            for (std::size_t i = 0; i + 1 < scale->size(); ++i) {
                Rule r;
                r.head = fn((*scale)[i], {Term::var("?X")});
                r.body.push_back(Literal{fn((*scale)[i + 1], {Term::var("?X")}), false});
                r.source = rec.id;
                emit(std::move(r));
            }
        }
        if (pos + 1 == scale->size()) {
            out_.notices.push_back("sentence " + rec.id + ": '" + t.name + "' is the top of its scale; no implicature");
            return;
        }
        std::string l = "imp" + std::to_string(++imps_);
        out_.label_source[l] = rec.id;
        emit(fact(Term::negate(fn((*scale)[pos + 1], t.args)), rec.id, l));
    }

    void disjunction(const SentenceRecord& rec, const Condition& k) {
        if (k.boxes.size() != 2)
            throw Error(Errc::unsupported, "sentence " + rec.id + ": disjunction with more than two alternatives");
        std::vector<Term> alts;
        for (const auto& b : k.boxes) {
            Scope s(doc_.discourse);
            auto lits = literals(b, Role::fact, s);
            if (lits.size() != 1) throw Error(Errc::unsupported, "sentence " + rec.id + ": compound disjunct");
            alts.push_back(lits[0]);
        }
        for (auto& r : encode_disjunction(k.exclusive, alts)) {
            r.source = rec.id;
            emit(std::move(r));
        }
    }

    const std::string& target_label(const SentenceRecord& rec, const std::string& target) {
        auto it = label_of_.find(target);
        if (it == label_of_.end())
            throw Error(Errc::dangling_target,
                        "sentence " + rec.id + ": target " + target + " is not a defeasible sentence");
        return it->second;
    }

    void cancel(const SentenceRecord& rec, const Condition& k) {
        Scope s(doc_.discourse);
        bind_objects(k.boxes[0], s);
        auto body_lits = literals(k.boxes[0], Role::body, s);
        std::vector<BodyItem> body;
        for (auto& t : body_lits) body.push_back(Literal{std::move(t), false});
        auto subj = premise_subject(k.boxes[0]);
        for (const auto& target : rec.cancel_targets) {
            const std::string label = target_label(rec, target);
            for (const auto& h : heads_[label]) {
                std::map<std::string, std::string> renamed;
                Term head = rename_vars(h, [&](const std::string& v) {
                    auto [it, fresh] = renamed.try_emplace(v, "");
                    if (fresh) it->second = s.unique(v);
                    return it->second;
                });
                // the premise is about the same individual as the cancelled conclusion
                const Term& first = head.atom().args.empty() ? head : head.atom().args[0];
                if (subj && first.is_var()) head = replace_var(head, first.name, s.term(*subj));
                Rule r;
                r.head = fn("cancel", {fn("handle", {Term::sym(label), head})});
                r.body = body;
                r.source = rec.id;
                emit(std::move(r));
            }
        }
    }

    void exception(const SentenceRecord& rec) {
        auto mine = label_of_.find(rec.id);
        if (mine == label_of_.end()) {
            out_.notices.push_back("sentence " + rec.id + ": strict exception needs no priority facts");
            return;
        }
        for (const auto& target : rec.exception->targets) {
            const std::string tl = target_label(rec, target);
            emit(fact(fn("overrides", {Term::sym(mine->second), Term::sym(tl)}), rec.id));
            for (const auto& hn : heads_[mine->second])
                for (const auto& ht : heads_[tl]) opposition(rec, hn, ht);
        }
    }

    // Head schemas of an exception and its target, unified where both hold variables.
    void opposition(const SentenceRecord& rec, const Term& hn, const Term& ht) {
        std::set<std::string> taken;
        std::vector<std::string> vs;
        hn.collect_vars(vs);
        taken.insert(vs.begin(), vs.end());
        Term t = rename_vars(ht, [&](const std::string& v) {
            std::string n = v;
            for (int k = 2; taken.count(n); ++k) n = v + std::to_string(k);
            return n;
        });
        const Term& a = hn.atom();
        Term b = t.atom();
        if (a.name == b.name && a.args.size() == b.args.size())
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i].is_var() && b.args[i].is_var()) {
                    t = replace_var(t, b.args[i].name, a.args[i]);
                    b = t.atom();
                }
        // complementary literals already oppose; identical schemas need a constraint instead
        if (hn.atom() == t.atom()) return;
        emit(fact(fn("opposes", {hn, t}), rec.id));
    }

    void limit(const SentenceRecord& rec) {
        const auto& root = doc_.discourse.root.conditions;
        const Condition* found = nullptr;
        for (std::size_t i = rec.cond_begin; i < rec.cond_end; ++i)
            if (root[i].op == Condition::Op::impl) found = &root[i];
        if (!found) throw Error(Errc::validation, "sentence " + rec.id + ": constraint without a conditional");
        const Condition& k = *found;
        Scope s(doc_.discourse);
        bind_objects(k.boxes[0], s);
        std::string leq;
        for (const auto& c : k.boxes[1].conditions)
            if (c.op == Condition::Op::simple && c.pred == "object" && c.args[4] == "leq") leq = c.args[0];
        bind_objects(k.boxes[1], s);
        auto lits = literals(k.boxes[1], Role::head, s);
        if (lits.size() != 1 || lits[0].is_strong_neg())
            throw Error(Errc::unsupported, "sentence " + rec.id + ": constraint must restrict a single positive literal");
        Term lit = lits[0];
        const Term leq_term = s.term(leq);
        std::size_t slot = lit.args.size();
        for (std::size_t i = 0; i < lit.args.size(); ++i)
            if (lit.args[i] == leq_term) slot = i;
        std::string base = "?Value";
        if (slot == lit.args.size()) {
            // the restricted value is not named in the sentence: pad to the program's arity
            std::size_t arity = lit.args.size();
            for (const auto& r : out_.program.rules) {
                const Term& h = r.head.atom();
                if (h.name == lit.name && h.args.size() > arity) {
                    arity = h.args.size();
                    if (h.args[slot].is_var()) base = h.args[slot].name;
                }
            }
            if (arity == lit.args.size())
                throw Error(Errc::unsupported, "sentence " + rec.id + ": nothing to restrict in " + print_term(lit));
            while (lit.args.size() < arity) lit.args.push_back(Term::var(s.unique("?V")));
        } else {
            base = lit.args[slot].name;
        }
        Term v1 = Term::var(base + "1"), v2 = Term::var(base + "2");
        Term a = lit, b = lit;
        a.args[slot] = v1;
        b.args[slot] = v2;
        Rule r;
        r.head = fn("opposes", {a, b});
        r.body.push_back(Builtin{"!=", v1, v2});
        r.source = rec.id;
        emit(std::move(r));
    }

    const Document& doc_;
    const ScaleTable& scales_;
    Translation out_;
    SkolemGen gen_;
    int facts_ = 0, rules_ = 0, imps_ = 0;
    std::map<std::string, std::string> label_of_;  // sentence id -> label
    std::map<std::string, std::vector<Term>> heads_;
    std::set<const std::vector<std::string>*> emitted_scales_;
    std::vector<const SentenceRecord*> limits_;
};

} // namespace

Translation translate(const Document& doc, const ScaleTable& scales) { return Translator(doc, scales).run(); }

lpda::Program overrides_closure(lpda::Program p) {
    std::map<std::string, std::set<std::string>> edge;
    std::set<std::pair<std::string, std::string>> have;
    std::map<std::string, std::string> source;
    for (const auto& r : p.rules) {
        const Term& h = r.head;
        if (r.label || !r.body.empty() || h.name != "overrides" || h.args.size() != 2 || !h.ground()) continue;
        auto a = print_term(h.args[0]), b = print_term(h.args[1]);
        edge[a].insert(b);
        have.insert({a, b});
        source.try_emplace(a, r.source);
    }
    // cycle check by DFS with an explicit path
    std::map<std::string, int> state;
    std::vector<std::string> path;
    std::function<void(const std::string&)> dfs = [&](const std::string& a) {
        state[a] = 1;
        path.push_back(a);
        for (const auto& b : edge[a]) {
            if (state[b] == 1) {
                std::string cyc;
                for (auto it = std::find(path.begin(), path.end(), b); it != path.end(); ++it) cyc += *it + " > ";
                throw Error(Errc::cycle, "overrides cycle: " + cyc + b);
            }
            if (state[b] == 0) dfs(b);
        }
        path.pop_back();
        state[a] = 2;
    };
    for (const auto& [a, bs] : edge)
        if (state[a] == 0) dfs(a);

    for (const auto& [a, bs] : edge) {
        std::set<std::string> reach;
        std::vector<std::string> stack(bs.begin(), bs.end());
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            if (!reach.insert(x).second) continue;
            for (const auto& y : edge[x]) stack.push_back(y);
        }
        for (const auto& c : reach) {
            if (have.count({a, c})) continue;
            have.insert({a, c});
            p.rules.push_back(fact(fn("overrides", {lpda::parse_literal(a), lpda::parse_literal(c)}), source[a]));
        }
    }
    return p;
}

std::vector<Rule> encode_disjunction(bool exclusive, const std::vector<Term>& alts) {
    if (alts.size() != 2)
        throw Error(Errc::unsupported, "disjunction over " + std::to_string(alts.size()) + " alternatives");
    std::vector<Rule> out;
    for (std::size_t i = 0; i < 2; ++i) {
        const Term& self = alts[i];
        const Term& other = alts[1 - i];
        Rule r;
        if (exclusive) {
            r.head = negate(other);
            r.body.push_back(Literal{self, false});
        } else {
            r.head = self;
            r.body.push_back(Literal{negate(other), false});
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BodyItem> question_goal(const QuestionDrs& q) {
    Scope s(q.discourse);
    std::vector<BodyItem> goal;
    for (auto& t : literals(q.box, Role::query, s)) goal.push_back(Literal{std::move(t), false});
    if (goal.empty()) throw Error(Errc::unsupported, "question has no queryable literal");
    return goal;
}

} // namespace cnl
