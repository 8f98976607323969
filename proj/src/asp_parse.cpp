#include "cnlkit/asp.hpp"

#include "cnlkit/error.hpp"

#include <cctype>

namespace cnl::asp {

namespace {

struct Tok {
    enum class K { ident, var, num, str, punct, directive, end };
    K k = K::end;
    std::string s;
    int line = 1, col = 1;
};

std::vector<Tok> lex(std::string_view src) {
    std::vector<Tok> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto is_id = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        std::size_t j = i;
        if (std::islower(static_cast<unsigned char>(c))) {
            while (j < src.size() && is_id(src[j])) ++j;
            t.k = Tok::K::ident;
        } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            while (j < src.size() && is_id(src[j])) ++j;
            t.k = Tok::K::var;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.k = Tok::K::num;
        } else if (c == '"') {
            j = src.find('"', i + 1);
            if (j == std::string_view::npos)
                throw Error(Errc::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                             ": unterminated string");
            ++j;
            t.k = Tok::K::str;
        } else if (c == '#') {
            ++j;
            while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
            t.k = Tok::K::directive;
        } else {
            static constexpr std::string_view two[] = {":-", "..", "!=", "<=", ">=", "==", "<>"};
            t.k = Tok::K::punct;
            j = i + 1;
            for (auto p : two)
                if (src.substr(i, 2) == p) j = i + 2;
            if (j == i + 1 && std::string_view("(){},;:|.+-*/<>=").find(c) == std::string_view::npos)
                throw Error(Errc::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                             ": unexpected character '" + std::string(1, c) + "'");
        }
        t.s = std::string(src.substr(i, j - i));
        if (t.s == "==") t.s = "=";
        if (t.s == "<>") t.s = "!=";
        adv(j - i);
        out.push_back(std::move(t));
    }
    Tok end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

bool is_atom_term(const Term& t) {
    if (t.is_strong_neg()) return is_atom_term(t.args[0]);
    return t.kind == Term::Kind::symbol || (t.kind == Term::Kind::compound && !t.is_arith() && t.name != "..");
}

bool has_range(const Term& t) {
    if (t.kind == Term::Kind::compound && t.name == ".." && t.args.size() == 2) return true;
    for (const auto& a : t.args)
        if (has_range(a)) return true;
    return false;
}

std::vector<Term> expand_ranges(const Term& t) {
    if (t.kind == Term::Kind::compound && t.name == ".." && t.args.size() == 2) {
        const auto& lo = t.args[0];
        const auto& hi = t.args[1];
        if (!lo.is_num() || !hi.is_num() || !lo.value.is_integer() || !hi.value.is_integer())
            throw Error(Errc::parse, "range bounds must be integers: " + t.str());
        std::vector<Term> out;
        for (auto v = lo.value.numerator(); v <= hi.value.numerator(); ++v) out.push_back(Term::num(Decimal(v)));
        return out;
    }
    if (t.args.empty()) return {t};
    std::vector<Term> acc{t};
    for (std::size_t k = 0; k < t.args.size(); ++k) {
        auto alts = expand_ranges(t.args[k]);
        std::vector<Term> next;
        for (const auto& base : acc)
            for (const auto& a : alts) {
                Term c = base;
                c.args[k] = a;
                next.push_back(std::move(c));
            }
        acc = std::move(next);
    }
    return acc;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Program program() {
        Program p;
        while (peek().k != Tok::K::end) statement(p);
        return p;
    }

    std::vector<BodyItem> body_only() {
        auto b = body();
        if (peek().k == Tok::K::punct && peek().s == ".") next();
        if (peek().k != Tok::K::end) fail("unexpected '" + peek().s + "'");
        return b;
    }

private:
    const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Tok& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool at(std::string_view p) const { return peek().k == Tok::K::punct && peek().s == p; }
    bool accept(std::string_view p) {
        if (!at(p)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse, "line " + std::to_string(peek().line) + ", column " + std::to_string(peek().col) +
                                     ": " + what);
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "' but found '" + peek().s + "'");
    }

    void statement(Program& p) {
        int line = peek().line;
        if (peek().k == Tok::K::directive) {
            directive(p);
            return;
        }
        Rule r;
        r.line = line;
        if (accept(":-")) {
            r.kind = Rule::Kind::constraint;
            r.body = body();
            expect(".");
            p.rules.push_back(std::move(r));
            return;
        }
        bool choice = at("{") || ((peek().k == Tok::K::num || peek().k == Tok::K::var) && peek(1).k == Tok::K::punct &&
                                  peek(1).s == "{");
        if (choice) {
            r.kind = Rule::Kind::choice;
            if (!at("{")) r.lower = primary();
            expect("{");
            if (!at("}")) {
                do {
                    r.elements.push_back(element());
                } while (accept(";"));
            }
            expect("}");
            if (peek().k == Tok::K::num || peek().k == Tok::K::var) r.upper = primary();
        } else {
            r.head.push_back(literal_term());
            while (accept("|") || accept(";")) r.head.push_back(literal_term());
        }
        if (accept(":-")) {
            if (!choice) r.kind = Rule::Kind::normal;
            r.body = body();
        } else if (!choice) {
            r.kind = Rule::Kind::fact;
        }
        expect(".");
        if (r.kind == Rule::Kind::fact && r.head.size() == 1) {
            for (auto& t : expand_ranges(r.head[0])) {
                Rule f;
                f.kind = Rule::Kind::fact;
                f.line = line;
                f.head.push_back(std::move(t));
                p.rules.push_back(std::move(f));
            }
            return;
        }
        for (const auto& h : r.head)
            if (has_range(h)) throw Error(Errc::parse, "line " + std::to_string(line) + ": ranges are only supported in facts");
        p.rules.push_back(std::move(r));
    }

    void directive(Program& p) {
        auto d = next();
        if (d.s == "#hide") {
            p.hide = true;
        } else if (d.s == "#show") {
            if (at(".")) {
                p.hide = true;
            } else {
                bool neg = accept("-");
                if (peek().k != Tok::K::ident) fail("expected predicate name after #show");
                std::string name = next().s;
                expect("/");
                if (peek().k != Tok::K::num) fail("expected arity after '/'");
                p.shows.push_back((neg ? "-" : "") + name + "/" + next().s);
            }
        } else {
            fail("unsupported directive " + d.s);
        }
        expect(".");
    }

    ChoiceElement element() {
        ChoiceElement e;
        e.atom = literal_term();
        if (accept(":")) {
            do {
                e.condition.push_back(body_item());
            } while (accept(","));
        }
        return e;
    }

    std::vector<BodyItem> body() {
        std::vector<BodyItem> out;
        do {
            out.push_back(body_item());
        } while (accept(","));
        return out;
    }

    BodyItem body_item() {
        if (peek().k == Tok::K::ident && peek().s == "not" &&
            (peek(1).k == Tok::K::ident || (peek(1).k == Tok::K::punct && peek(1).s == "-"))) {
            next();
            return Literal{literal_term(), true};
        }
        Term t = term();
        static constexpr std::string_view ops[] = {"=", "!=", "<", "<=", ">", ">="};
        for (auto op : ops) {
            if (at(op)) {
                next();
                return Builtin{std::string(op), std::move(t), term()};
            }
        }
        if (!is_atom_term(t)) fail("expected a literal, found " + t.str());
        return Literal{std::move(t), false};
    }

    Term literal_term() {
        Term t = term();
        if (!is_atom_term(t)) fail("expected an atom, found " + t.str());
        return t;
    }

    Term term() {
        Term lo = additive();
        if (accept("..")) return Term::fn("..", {std::move(lo), additive()});
        return lo;
    }

    Term additive() {
        Term t = multiplicative();
        while (at("+") || at("-")) {
            std::string op = next().s;
            t = Term::fn(op, {std::move(t), multiplicative()});
        }
        return t;
    }

    Term multiplicative() {
        Term t = unary();
        while (at("*") || at("/")) {
            std::string op = next().s;
            t = Term::fn(op, {std::move(t), unary()});
        }
        return t;
    }

    Term unary() {
        if (accept("-")) {
            Term x = unary();
            if (x.is_num()) return Term::num(-x.value);
            if (is_atom_term(x)) return Term::negate(std::move(x));
            return Term::fn("-", {Term::num(Decimal(0)), std::move(x)});
        }
        return primary();
    }

    Term primary() {
        const Tok& t = peek();
        switch (t.k) {
        case Tok::K::num:
            next();
            return Term::num(*Decimal::parse(t.s));
        case Tok::K::var: {
            next();
            if (t.s == "_") return Term::var("_anon" + std::to_string(anon_++));
            return Term::var(t.s);
        }
        case Tok::K::str:
            next();
            return Term::sym(t.s);
        case Tok::K::ident: {
            std::string name = next().s;
            if (!accept("(")) return Term::sym(name);
            std::vector<Term> args;
            if (!at(")")) {
                do {
                    args.push_back(term());
                } while (accept(","));
            }
            expect(")");
            return Term::fn(name, std::move(args));
        }
        case Tok::K::punct:
            if (accept("(")) {
                Term x = term();
                expect(")");
                return x;
            }
            break;
        default:
            break;
        }
        fail(t.k == Tok::K::end ? "unexpected end of input" : "unexpected '" + t.s + "'");
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
};

} // namespace

Program parse_asp(std::string_view text) { return Parser(text).program(); }

std::vector<Term> parse_query(std::string_view text) {
    std::vector<Term> out;
    for (auto& item : Parser(text).body_only()) {
        auto* lit = std::get_if<Literal>(&item);
        if (!lit || lit->naf) throw Error(Errc::parse, "query conjuncts must be literals");
        if (!lit->atom.ground()) throw Error(Errc::parse, "query literal " + lit->atom.str() + " is not ground");
        out.push_back(lit->atom);
    }
    return out;
}

} // namespace cnl::asp
