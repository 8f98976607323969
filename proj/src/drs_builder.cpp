#include "cnlkit/drs.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cnl {

namespace {

const Tree* child(const Tree& t, std::string_view cat, int occurrence = 1) {
    for (const auto& k : t.children)
        if (k.category == cat && --occurrence == 0) return &k;
    return nullptr;
}

std::string cats(const Tree& t) {
    std::string s;
    for (const auto& k : t.children) s += (s.empty() ? "" : " ") + k.category;
    return s;
}

int first_token(const Tree& t) {
    if (t.leaf()) return t.token;
    for (const auto& k : t.children) {
        int v = first_token(k);
        if (v >= 0) return v;
    }
    return -1;
}

std::string surface(const Tree& t) {
    if (t.leaf()) return t.word;
    std::string s;
    for (const auto& k : t.children) {
        auto w = surface(k);
        if (!w.empty()) s += (s.empty() ? "" : " ") + w;
    }
    return s;
}

const std::string& symbol(const Tree& leaf) {
    if (!leaf.entry) throw Error(Errc::validation, "tree leaf '" + leaf.word + "' carries no lexicon entry");
    return leaf.entry->symbol;
}

std::string number_arg(const std::string& tok) { return tok[0] == '$' ? tok.substr(1) : tok; }

std::string label_name(int i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    return s;
}

bool generic_det(const std::string& d) { return d == "every" || d == "all" || d == "no"; }

} // namespace

const char* op_name(Condition::Op op) {
    switch (op) {
    case Condition::Op::simple: return "simple";
    case Condition::Op::neg: return "neg";
    case Condition::Op::disj: return "disj";
    case Condition::Op::impl: return "impl";
    case Condition::Op::dflt: return "default";
    }
    return "?";
}

const Referent* Discourse::find(const std::string& label) const {
    for (const auto& r : referents)
        if (r.label == label) return &r;
    return nullptr;
}

struct DrsBuilder::Ctx {
    int sentence = 0;
    std::string sid;
    int paragraph = 1;
    std::vector<std::string> scope;  // visible labels, introduction order
};

std::string DrsBuilder::fresh(Referent r, Drs& box, Ctx& c) {
    r.label = label_name(next_label_++);
    r.sid = c.sid;
    r.sentence = c.sentence;
    r.paragraph = c.paragraph;
    box.universe.push_back(r.label);
    c.scope.push_back(r.label);
    d_.referents.push_back(r);
    return r.label;
}

void DrsBuilder::simple(Drs& box, const Ctx& c, std::string pred, std::vector<std::string> args, int token) {
    Condition k;
    k.pred = std::move(pred);
    k.args = std::move(args);
    k.index = std::to_string(c.sentence) + "/" + std::to_string(token + 1);
    k.sentence = c.sentence;
    box.conditions.push_back(std::move(k));
}

void DrsBuilder::restore(Ctx& c, const std::vector<std::string>& before) const {
    // labels introduced in a closed sub-box go out of view; root ones stay
    const auto& root = d_.root.universe;
    auto in = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::vector<std::string> kept;
    for (const auto& x : c.scope)
        if (in(before, x) || in(root, x)) kept.push_back(x);
    c.scope = std::move(kept);
}

void DrsBuilder::mention(Ctx& c, const std::string& label) const {
    auto it = std::find(c.scope.begin(), c.scope.end(), label);
    if (it != c.scope.end()) c.scope.erase(it);
    c.scope.push_back(label);
}

std::string DrsBuilder::introduce(const Tree& n, const std::string& quant, Drs& box, Ctx& c) {
    const Tree* noun = child(n, "noun");
    const auto& e = *noun->entry;
    Referent r;
    r.token = noun->token + 1;
    r.noun = e.symbol;
    r.number = e.features.number.value_or(Number::sg);
    r.gender = e.features.gender.value_or(Gender::n);
    r.quant = quant;
    std::string x = fresh(r, box, c);
    const bool plural = r.number == Number::pl;
    if (quant == "mass") simple(box, c, "object", {x, e.symbol, "mass", "na", "na", "na"}, noun->token);
    else if (quant == "two") simple(box, c, "object", {x, e.symbol, "countable", "na", "eq", "2"}, noun->token);
    else if (plural) simple(box, c, "object", {x, e.symbol, "countable", "na", "geq", "2"}, noun->token);
    else simple(box, c, "object", {x, e.symbol, "countable", "na", "eq", "1"}, noun->token);
    if (const Tree* adj = child(n, "adj")) {
        const auto& a = *adj->entry;
        simple(box, c, "property", {x, a.symbol, degree_name(a.features.degree.value_or(Degree::pos))}, adj->token);
    }
    return x;
}

std::string DrsBuilder::np(const Tree& t, Drs& box, Ctx& c) {
    const std::string shape = cats(t);
    if (shape == "pnoun") {
        const Tree& pn = t.children[0];
        const auto& e = *pn.entry;
        for (const auto& r : d_.referents)
            if (r.name == e.symbol) {
                mention(c, r.label);
                return r.label;
            }
        Referent r;
        r.token = pn.token + 1;
        r.name = e.symbol;
        r.gender = e.features.gender.value_or(Gender::n);
        r.number = e.features.number.value_or(Number::sg);
        r.quant = "named";
        // names live in the root box whatever the current nesting
        std::string x = fresh(r, d_.root, c);
        simple(d_.root, c, "object", {x, e.symbol, "named", "na", "eq", "1"}, pn.token);
        return x;
    }
    if (shape == "Pro") {
        const Tree& p = t.children[0];
        const std::string w = lowercase(p.word);
        std::optional<Gender> g;
        Number n = Number::sg;
        if (w == "he") g = Gender::m;
        else if (w == "she") g = Gender::f;
        else if (w == "it") g = Gender::n;
        else n = Number::pl;
        std::string x = resolve_pronoun(g, n, p.word, &c.scope).label;
        mention(c, x);
        return x;
    }
    if (shape == "the Ord noun") {
        static const std::vector<std::string> ords{"first", "second", "third", "fourth"};
        const std::string w = lowercase(child(t, "Ord")->word);
        int k = static_cast<int>(std::find(ords.begin(), ords.end(), w) - ords.begin()) + 1;
        std::string x = resolve_ordinal(symbol(*child(t, "noun")), k, c.paragraph, surface(t), &c.scope).label;
        mention(c, x);
        return x;
    }
    if (shape == "det Unit of noun") {
        const Tree* noun = child(t, "noun");
        const std::string unit = lowercase(child(t, "Unit")->word);
        Referent r;
        r.token = noun->token + 1;
        r.noun = symbol(*noun);
        r.number = Number::sg;
        r.gender = Gender::n;
        r.quant = "measure";
        std::string x = fresh(r, box, c);
        simple(box, c, "object", {x, r.noun, "mass", unit, "eq", "1"}, noun->token);
        return x;
    }
    if (shape == "N") {
        const Tree& n = t.children[0];
        const bool plural = child(n, "noun")->entry->features.number == Number::pl;
        return introduce(n, plural ? "bare" : "mass", box, c);
    }
    if (shape == "det N" || shape == "det N that VP") {
        const std::string det = symbol(t.children[0]);
        const Tree& n = t.children[1];
        std::string x;
        if (det == "the") {
            x = resolve_definite(symbol(*child(n, "noun")), surface(t), &c.scope).label;
            mention(c, x);
        } else {
            x = introduce(n, det, box, c);
        }
        if (const Tree* rel = child(t, "VP")) vp(*rel, x, box, c);
        return x;
    }
    throw Error(Errc::unsupported, "noun phrase '" + surface(t) + "' (" + shape + ")");
}

void DrsBuilder::vp(const Tree& t, const std::string& subj, Drs& box, Ctx& c) {
    v1(t.children[0], subj, box, c);
    if (const Tree* rest = child(t, "VP")) vp(*rest, subj, box, c);
}

void DrsBuilder::predication(const Tree& t, std::size_t verb_at, const std::string& subj, Drs& box, Ctx& c) {
    const Tree& verb = t.children[verb_at];
    const std::string& v = symbol(verb);
    if (v == "seek")
        throw Error(Errc::unsupported, "intensional verb '" + verb.word + "' at token " + std::to_string(verb.token + 1) +
                                           ": '" + surface(t) + "' has no extensional reading");
    std::string obj;
    if (const Tree* o = child(t, "NP")) obj = np(*o, box, c);
    Referent ev;
    ev.sort = Referent::Sort::event;
    ev.token = verb.token + 1;
    ev.noun = v;
    std::string e = fresh(ev, box, c);
    std::vector<std::string> args{e, v, subj};
    if (!obj.empty()) args.push_back(obj);
    simple(box, c, "predicate", args, verb.token);
    for (const Tree* pps = child(t, "Pps"); pps; pps = child(*pps, "Pps")) {
        const Tree& pp = pps->children[0];
        const Tree& prep = pp.children[0];
        const Tree& arg = pp.children[1];
        std::string x = arg.category == "num" ? number_arg(arg.word) : np(arg, box, c);
        simple(box, c, "modifier_pp", {e, symbol(prep), x}, prep.token);
    }
    if (const Tree* adv = child(t, "adv")) simple(box, c, "modifier_adv", {e, symbol(*adv), "pos"}, adv->token);
}

void DrsBuilder::copula(const Tree& pred, int cop_token, const std::string& subj, Drs& box, Ctx& c) {
    const std::string shape = cats(pred);
    if (shape == "adj") {
        const Tree& a = pred.children[0];
        simple(box, c, "property",
               {subj, symbol(a), degree_name(a.entry->features.degree.value_or(Degree::pos))}, a.token);
        return;
    }
    const Tree& n = *child(pred, "N");
    std::string y = introduce(n, shape == "N" ? "pred" : symbol(pred.children[0]), box, c);
    Referent ev;
    ev.sort = Referent::Sort::event;
    ev.token = cop_token + 1;
    ev.noun = "be";
    std::string e = fresh(ev, box, c);
    simple(box, c, "predicate", {e, "be", subj, y}, cop_token);
}

void DrsBuilder::v1(const Tree& t, const std::string& subj, Drs& box, Ctx& c) {
    const std::string head = t.children[0].category;
    if (head == "verb" && (child(t, "either") || child(t, "or"))) {
        // alternatives: one box each, exclusive when introduced by "either"
        Condition dj;
        dj.op = Condition::Op::disj;
        dj.exclusive = child(t, "either") != nullptr;
        dj.sentence = c.sentence;
        const Tree& verb = t.children[0];
        std::vector<const Tree*> objs;
        for (const auto& k : t.children)
            if (k.category == "NP") objs.push_back(&k);
        const Tree* prep = child(t, "prep");
        for (std::size_t i = 0; i < objs.size(); ++i) {
            Drs alt;
            const auto mark = c.scope;
            std::string x = np(*objs[i], alt, c);
            Referent ev;
            ev.sort = Referent::Sort::event;
            ev.token = verb.token + 1;
            ev.noun = symbol(verb);
            std::string e = fresh(ev, alt, c);
            simple(alt, c, "predicate", {e, symbol(verb), subj}, verb.token);
            const Tree* p = dj.exclusive ? child(t, "prep", static_cast<int>(i) + 1) : prep;
            simple(alt, c, "modifier_pp", {e, symbol(*p), x}, p->token);
            restore(c, mark);
            dj.boxes.push_back(std::move(alt));
        }
        box.conditions.push_back(std::move(dj));
        return;
    }
    if (head == "verb") return predication(t, 0, subj, box, c);
    if (head == "will") return predication(t, 1, subj, box, c);
    const bool negated = child(t, "not") != nullptr;
    const int cop = t.children[0].token;
    if (!negated) return copula(*child(t, "Pred"), cop, subj, box, c);

    Condition ng;
    ng.op = Condition::Op::neg;
    ng.sentence = c.sentence;
    Drs inner;
    const auto mark = c.scope;
    if (head == "does" || head == "do") predication(t, 2, subj, inner, c);
    else copula(*child(t, "Pred"), cop, subj, inner, c);
    restore(c, mark);
    ng.boxes.push_back(std::move(inner));
    box.conditions.push_back(std::move(ng));
}

void DrsBuilder::build(const Tree& tree, SentenceRecord& rec) {
    const Tree& form = tree.category == "S" ? tree.children[0] : tree;
    rec.form = lowercase(form.category);
    if (rec.form == "question") throw Error(Errc::unsupported, "sentence " + rec.id + ": questions are not asserted");
    Ctx c;
    c.sentence = rec.ordinal;
    c.sid = rec.id;
    c.paragraph = rec.paragraph;
    c.scope = d_.history;
    rec.cond_begin = d_.root.conditions.size();
    Drs& root = d_.root;

    auto subject_generic = [&](const Tree& np_node) -> std::string {
        const std::string shape = cats(np_node);
        if ((shape == "det N" || shape == "det N that VP") && generic_det(symbol(np_node.children[0])))
            return symbol(np_node.children[0]);
        if (shape == "N" && child(np_node.children[0], "noun")->entry->features.number == Number::pl) return "bare";
        return "";
    };
    auto complex = [&](Condition::Op op, Drs ante, Drs cons) {
        Condition k;
        k.op = op;
        k.sentence = c.sentence;
        k.boxes.push_back(std::move(ante));
        k.boxes.push_back(std::move(cons));
        root.conditions.push_back(std::move(k));
    };
    // Subject plus verb phrase; generic subjects open an implication (or default).
    auto clause = [&](const Tree& np_node, const Tree& vp_node, std::optional<Condition::Op> generic_op) {
        std::string g = subject_generic(np_node);
        if (g.empty() && !generic_op) {
            std::string s = np(np_node, root, c);
            vp(vp_node, s, root, c);
            return;
        }
        const auto mark = c.scope;
        Drs ante, cons;
        std::string s = np(np_node, ante, c);
        if (g == "no") {
            Condition ng;
            ng.op = Condition::Op::neg;
            ng.sentence = c.sentence;
            Drs inner;
            vp(vp_node, s, inner, c);
            ng.boxes.push_back(std::move(inner));
            cons.conditions.push_back(std::move(ng));
        } else {
            vp(vp_node, s, cons, c);
        }
        restore(c, mark);
        complex(generic_op.value_or(Condition::Op::impl), std::move(ante), std::move(cons));
    };

    if (rec.form == "decl") {
        clause(form.children[0], form.children[1], std::nullopt);
    } else if (rec.form == "default") {
        clause(*child(form, "NP"), *child(form, "VP"), Condition::Op::dflt);
    } else if (rec.form == "cond" || rec.form == "cancel") {
        const auto mark = c.scope;
        Drs ante, cons;
        std::string s = np(*child(form, "NP"), ante, c);
        vp(*child(form, "VP"), s, ante, c);
        if (rec.form == "cond") {
            std::string s2 = np(*child(form, "NP", 2), cons, c);
            vp(*child(form, "VP", 2), s2, cons, c);
        }
        restore(c, mark);
        complex(Condition::Op::impl, std::move(ante), std::move(cons));
    } else if (rec.form == "limit") {
        const auto mark = c.scope;
        Drs ante, cons;
        std::string s = np(*child(form, "NP"), ante, c);
        const Tree& verb = *child(form, "verb");
        const Tree& noun = *child(form, "noun");
        std::string any;
        if (const Tree* a = child(form, "Any")) {
            const Tree& an = *child(*a, "noun");
            Referent r;
            r.token = an.token + 1;
            r.noun = symbol(an);
            r.number = Number::sg;
            r.gender = Gender::n;
            r.quant = "any";
            any = fresh(r, ante, c);
            simple(ante, c, "object", {any, r.noun, "countable", "na", "eq", "1"}, an.token);
        }
        Referent r;
        r.token = noun.token + 1;
        r.noun = symbol(noun);
        r.number = Number::sg;
        r.gender = Gender::n;
        r.quant = "leq1";
        std::string y = fresh(r, cons, c);
        simple(cons, c, "object", {y, r.noun, "countable", "na", "leq", "1"}, noun.token);
        Referent ev;
        ev.sort = Referent::Sort::event;
        ev.token = verb.token + 1;
        ev.noun = symbol(verb);
        std::string e = fresh(ev, cons, c);
        if (const Tree* prep = child(form, "prep")) {
            simple(cons, c, "predicate", {e, symbol(verb), s}, verb.token);
            simple(cons, c, "modifier_pp", {e, symbol(*prep), y}, prep->token);
        } else {
            simple(cons, c, "predicate", {e, symbol(verb), s, y}, verb.token);
        }
        if (!any.empty()) {
            const Tree& a = *child(form, "Any");
            simple(cons, c, "modifier_pp", {e, symbol(a.children[0]), any}, a.children[0].token);
        }
        restore(c, mark);
        complex(Condition::Op::impl, std::move(ante), std::move(cons));
    } else {
        throw Error(Errc::unsupported, "sentence " + rec.id + ": form " + form.category);
    }
    rec.cond_end = root.conditions.size();
    d_.history = std::move(c.scope);
}

QuestionDrs DrsBuilder::question(const Tree& tree, int ordinal) const {
    const Tree& form = tree.category == "S" ? tree.children[0] : tree;
    if (form.category != "Question") throw Error(Errc::parse, "not a question: '" + surface(tree) + "'");
    DrsBuilder b = *this;
    Ctx c;
    c.sentence = ordinal;
    c.sid = "?";
    c.paragraph = d_.referents.empty() ? 1 : d_.referents.back().paragraph;
    c.scope = d_.history;
    Drs box;
    const std::string shape = cats(form);
    const Tree& first = form.children[0];
    if (first.category == "how") {
        // how much N does NP verb prep verb NP
        std::string s = b.np(*child(form, "NP"), box, c);
        const Tree& noun = *child(form, "noun");
        Referent r;
        r.token = noun.token + 1;
        r.noun = symbol(noun);
        r.number = Number::sg;
        r.gender = Gender::n;
        r.quant = "howmuch";
        std::string d = b.fresh(r, box, c);
        b.simple(box, c, "object", {d, r.noun, "countable", "na", "eq", "1"}, noun.token);
        b.simple(box, c, "query", {d, "how_much"}, first.token);
        std::string x = b.np(*child(form, "NP", 2), box, c);
        const Tree& verb = *child(form, "verb");
        Referent ev;
        ev.sort = Referent::Sort::event;
        ev.token = verb.token + 1;
        ev.noun = symbol(verb);
        std::string e = b.fresh(ev, box, c);
        b.simple(box, c, "predicate", {e, symbol(verb), s, d}, verb.token);
        const Tree& prep = *child(form, "prep");
        b.simple(box, c, "modifier_pp", {e, symbol(prep), x}, prep.token);
    } else if (first.category == "does") {
        std::string s = b.np(*child(form, "NP"), box, c);
        Tree rest = form;
        rest.children.erase(rest.children.begin(), rest.children.begin() + 2);  // drop "does NP"
        b.predication(rest, 0, s, box, c);
    } else if (first.category == "is") {
        std::string s = b.np(*child(form, "NP"), box, c);
        const Tree& a = *child(form, "adj");
        b.simple(box, c, "property", {s, symbol(a), degree_name(a.entry->features.degree.value_or(Degree::pos))}, a.token);
    } else {
        throw Error(Errc::unsupported, "question shape " + shape);
    }
    return {std::move(box), std::move(b.d_)};
}

const Referent& DrsBuilder::resolve_pronoun(std::optional<Gender> g, Number n, const std::string& np,
                                            const std::vector<std::string>* scope) const {
    const auto& s = scope ? *scope : d_.history;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        const Referent* r = d_.find(*it);
        if (!r || r->sort != Referent::Sort::object) continue;
        if (r->number != n) continue;
        if (g && r->gender != g) continue;
        return *r;
    }
    throw Error(Errc::unresolved_reference, "no antecedent for '" + np + "'");
}

const Referent& DrsBuilder::resolve_definite(const std::string& noun, const std::string& np,
                                             const std::vector<std::string>* scope) const {
    const auto& s = scope ? *scope : d_.history;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        const Referent* r = d_.find(*it);
        if (r && r->sort == Referent::Sort::object && !r->noun.empty() && lex_->same_concept(r->noun, noun)) return *r;
    }
    throw Error(Errc::unresolved_reference, "no antecedent for '" + np + "'");
}

const Referent& DrsBuilder::resolve_ordinal(const std::string& noun, int k, int paragraph, const std::string& np,
                                            const std::vector<std::string>* scope) const {
    const auto& s = scope ? *scope : d_.history;
    int seen = 0;
    for (const auto& ref : d_.referents) {
        if (std::find(s.begin(), s.end(), ref.label) == s.end()) continue;
        const Referent* r = &ref;
        if (r->sort != Referent::Sort::object || r->paragraph != paragraph) continue;
        if (r->noun.empty() || !lex_->same_concept(r->noun, noun)) continue;
        if (++seen == k) return *r;
    }
    throw Error(Errc::unresolved_reference, "no antecedent for '" + np + "'");
}

void check_scope(const Discourse& d) {
    std::set<std::string> labels;
    for (const auto& r : d.referents) labels.insert(r.label);
    std::function<void(const Drs&, std::vector<std::string>)> walk = [&](const Drs& box,
                                                                        std::vector<std::string> visible) {
        visible.insert(visible.end(), box.universe.begin(), box.universe.end());
        auto ok = [&](const std::string& a) {
            return !labels.count(a) || std::find(visible.begin(), visible.end(), a) != visible.end();
        };
        for (const auto& k : box.conditions) {
            if (k.op == Condition::Op::simple) {
                for (const auto& a : k.args)
                    if (!ok(a)) throw Error(Errc::scope, "referent " + a + " used out of scope in " + k.pred + " at " + k.index);
            } else if (k.op == Condition::Op::impl || k.op == Condition::Op::dflt) {
                walk(k.boxes[0], visible);
                auto inner = visible;
                inner.insert(inner.end(), k.boxes[0].universe.begin(), k.boxes[0].universe.end());
                walk(k.boxes[1], inner);
            } else {
                for (const auto& b : k.boxes) walk(b, visible);
            }
        }
    };
    walk(d.root, {});
}

std::string print_drs(const Drs& d, int indent) {
    std::ostringstream os;
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    os << pad << "[";
    for (std::size_t i = 0; i < d.universe.size(); ++i) os << (i ? "," : "") << d.universe[i];
    os << "]\n";
    for (const auto& k : d.conditions) {
        switch (k.op) {
        case Condition::Op::simple: {
            os << pad << k.pred << "(";
            for (std::size_t i = 0; i < k.args.size(); ++i) os << (i ? "," : "") << k.args[i];
            os << ")-" << k.index << "\n";
            break;
        }
        case Condition::Op::neg:
            os << pad << "NOT\n" << print_drs(k.boxes[0], indent + 3);
            break;
        case Condition::Op::disj:
            os << pad << (k.exclusive ? "XOR\n" : "OR\n");
            for (std::size_t i = 0; i < k.boxes.size(); ++i) {
                if (i) os << pad << "   v\n";
                os << print_drs(k.boxes[i], indent + 3);
            }
            break;
        case Condition::Op::impl:
        case Condition::Op::dflt:
            os << pad << (k.op == Condition::Op::impl ? "IF\n" : "DEFAULT\n");
            os << print_drs(k.boxes[0], indent + 3);
            os << pad << "   " << (k.op == Condition::Op::impl ? "=>" : "~~>") << "\n";
            os << print_drs(k.boxes[1], indent + 3);
            break;
        }
    }
    return os.str();
}

std::string print_discourse(const Discourse& d) { return print_drs(d.root); }

} // namespace cnl
