#include "cnlkit/lpda.hpp"

#include "cnlkit/error.hpp"

#include <cctype>

namespace cnl::lpda {

namespace {

struct Tok {
    enum class K { ident, var, num, str, punct, end };
    K k = K::end;
    std::string s;
    int line = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '#'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '#'; }

std::vector<Tok> lex(std::string_view src) {
    std::vector<Tok> out;
    int line = 1;
    std::size_t i = 0;
    auto fail = [&](const std::string& what) {
        throw Error(Errc::parse, "line " + std::to_string(line) + ": " + what);
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        Tok t;
        t.line = line;
        std::size_t j = i + 1;
        if (c == '?') {
            while (j < src.size() && ident_char(src[j])) ++j;
            t.k = Tok::K::var;
        } else if (ident_start(c)) {
            while (j < src.size() && ident_char(src[j])) ++j;
            t.k = Tok::K::ident;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            t.k = Tok::K::num;
        } else if (c == '\'') {
            j = src.find('\'', i + 1);
            if (j == std::string_view::npos) fail("unterminated quote");
            t.k = Tok::K::str;
            t.s = std::string(src.substr(i + 1, j - i - 1));
            i = j + 1;
            out.push_back(std::move(t));
            continue;
        } else {
            t.k = Tok::K::punct;
            auto two = src.substr(i, 2);
            if (two == ":-" || two == "!=" || two == "<=" || two == ">=") j = i + 2;
            else if (std::string_view("(){},.@=<>+-*/").find(c) == std::string_view::npos)
                fail(std::string("unexpected character '") + c + "'");
        }
        t.s = std::string(src.substr(i, j - i));
        i = j;
        out.push_back(std::move(t));
    }
    Tok end;
    end.line = line;
    out.push_back(end);
    return out;
}

bool is_atom(const Term& t) {
    if (t.is_strong_neg()) return is_atom(t.args[0]);
    return t.kind == Term::Kind::symbol || (t.is_compound() && !t.is_arith());
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    Program program() {
        Program p;
        while (peek().k != Tok::K::end) p.rules.push_back(rule());
        return p;
    }

    Term lone_literal() {
        Term t = literal_head();
        accept(".");
        if (peek().k != Tok::K::end) fail("trailing input '" + peek().s + "'");
        return t;
    }

    std::vector<BodyItem> goal() {
        std::vector<BodyItem> out;
        do {
            out.push_back(body_item());
        } while (accept(","));
        accept(".");
        accept("?");
        if (peek().k != Tok::K::end) fail("trailing input '" + peek().s + "'");
        return out;
    }

private:
    const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Tok& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool at(std::string_view p) const { return peek().k == Tok::K::punct && peek().s == p; }
    bool at_word(std::string_view w) const { return peek().k == Tok::K::ident && peek().s == w; }
    bool accept(std::string_view p) {
        if (!at(p)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse, "line " + std::to_string(peek().line) + ": " + what);
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "' but found '" + peek().s + "'");
    }

    Rule rule() {
        Rule r;
        r.line = peek().line;
        if (accept("@")) {
            if (accept("{")) {
                r.label = expr();
                expect("}");
            } else {
                r.label = primary();
            }
        }
        r.head = literal_head();
        if (accept(":-")) {
            do {
                r.body.push_back(body_item());
            } while (accept(","));
        }
        expect(".");
        return r;
    }

    // neg/not prefixes reduced: `neg neg L` = L, `not not L` = L.
    Term literal_head() {
        bool neg = false;
        while (at_word("neg")) {
            next();
            neg = !neg;
        }
        if (at_word("not")) fail("rule heads must be not-free literals");
        Term a = primary();
        if (!is_atom(a)) fail("expected an atom, found " + print_term(a));
        return neg ? Term::negate(std::move(a)) : a;
    }

    BodyItem body_item() {
        bool naf = false, neg = false, prefixed = false;
        while (at_word("not") || at_word("neg")) {
            if (next().s == "not") naf = !naf;
            else neg = !neg;
            prefixed = true;
        }
        Term lhs = expr();
        if (!prefixed) {
            if (at_word("is")) {
                next();
                return Builtin{"is", std::move(lhs), expr()};
            }
            static constexpr std::string_view ops[] = {"=", "!=", "<", "<=", ">", ">="};
            for (auto op : ops)
                if (at(op)) {
                    next();
                    return Builtin{std::string(op), std::move(lhs), expr()};
                }
        }
        if (!is_atom(lhs)) fail("expected a literal, found " + print_term(lhs));
        if (neg) lhs = Term::negate(std::move(lhs));
        return Literal{std::move(lhs), naf};
    }

    Term expr() {
        Term t = term_mul();
        while (at("+") || at("-")) {
            std::string op = next().s;
            t = Term::fn(op, {std::move(t), term_mul()});
        }
        return t;
    }

    Term term_mul() {
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
        case Tok::K::var:
            next();
            if (t.s == "?") return Term::var("?_" + std::to_string(anon_++));
            return Term::var(t.s);
        case Tok::K::str:
        case Tok::K::ident: {
            if (t.k == Tok::K::ident && t.s == "neg") {
                next();
                Term a = primary();
                if (!is_atom(a)) fail("neg applies to atoms only");
                return Term::negate(std::move(a));
            }
            std::string name = next().s;  // quoted names may be functors too
            if (!accept("(")) return Term::sym(name);
            std::vector<Term> args;
            do {
                args.push_back(expr());
            } while (accept(","));
            expect(")");
            return Term::fn(name, std::move(args));
        }
        case Tok::K::punct:
            if (accept("(")) {
                Term x = expr();
                expect(")");
                return x;
            }
            break;
        case Tok::K::end:
            fail("unexpected end of input");
        }
        fail("unexpected '" + t.s + "'");
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
};

bool needs_quote(const std::string& s) {
    if (s.empty()) return true;
    if (!ident_start(s[0]) && s[0] != '$') return true;
    for (char c : s)
        if (!ident_char(c)) return true;
    return s == "neg" || s == "not" || s == "is";
}

std::string print_item(const BodyItem& item) {
    if (const auto* lit = std::get_if<Literal>(&item)) return (lit->naf ? "not " : "") + print_term(lit->atom);
    const auto& b = std::get<Builtin>(item);
    return print_term(b.lhs) + (b.op == "is" ? " is " : b.op) + print_term(b.rhs);
}

} // namespace

Program parse_lpda(std::string_view text) { return Parser(text).program(); }
Term parse_literal(std::string_view text) { return Parser(text).lone_literal(); }
std::vector<BodyItem> parse_goal(std::string_view text) { return Parser(text).goal(); }

std::string print_term(const Term& t) {
    switch (t.kind) {
    case Term::Kind::number: return t.value.str();
    case Term::Kind::variable: return t.name;
    case Term::Kind::symbol: return needs_quote(t.name) ? "'" + t.name + "'" : t.name;
    case Term::Kind::compound: break;
    }
    if (t.is_strong_neg()) return "neg " + print_term(t.args[0]);
    if (t.is_arith()) return print_term(t.args[0]) + t.name + print_term(t.args[1]);
    std::string s = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ',';
        s += print_term(t.args[i]);
    }
    return s + ")";
}

std::string print_rule(const Rule& r) {
    std::string s;
    if (r.label) s += "@{" + print_term(*r.label) + "} ";
    s += print_term(r.head);
    for (std::size_t i = 0; i < r.body.size(); ++i) s += (i ? "," : ":-") + print_item(r.body[i]);
    return s + ".";
}

std::string print_program(const Program& p) {
    std::string s;
    for (const auto& r : p.rules) s += print_rule(r) + "\n";
    return s;
}

} // namespace cnl::lpda
