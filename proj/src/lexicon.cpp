#include "cnlkit/lexicon.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cnl {

namespace {

constexpr std::pair<Pos, const char*> kPosNames[] = {
    {Pos::noun, "noun"}, {Pos::pnoun, "pnoun"}, {Pos::verb, "verb"},         {Pos::adj, "adj"},
    {Pos::adv, "adv"},   {Pos::adv_comp, "adv_comp"}, {Pos::adv_sup, "adv_sup"}, {Pos::prep, "prep"},
    {Pos::det, "det"},   {Pos::num, "num"},
};

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    if (!std::islower(static_cast<unsigned char>(s[0])) && !std::isupper(static_cast<unsigned char>(s[0])) &&
        !std::isdigit(static_cast<unsigned char>(s[0])))
        return true;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    return false;
}

std::string quote(const std::string& s) { return needs_quotes(s) ? "'" + s + "'" : s; }

struct Statement {
    std::string functor;
    std::vector<std::string> args;
    int line = 0;
};

// Splits `f(a, 'b c', d).` statements; `%` comments run to end of line.
std::vector<Statement> split_statements(std::string_view src) {
    std::vector<Statement> out;
    std::size_t i = 0;
    int line = 1;
    auto fail = [&](const std::string& what) {
        throw Error(Errc::parse, "lexicon line " + std::to_string(line) + ": " + what);
    };
    auto skip_ws = [&] {
        while (i < src.size()) {
            char c = src[i];
            if (c == '\n') {
                ++line;
                ++i;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '%') {
                while (i < src.size() && src[i] != '\n') ++i;
            } else {
                break;
            }
        }
    };
    auto read_atom = [&]() -> std::string {
        skip_ws();
        if (i >= src.size()) fail("unexpected end of input");
        if (src[i] == '\'') {
            std::size_t j = src.find('\'', i + 1);
            if (j == std::string_view::npos) fail("unterminated quote");
            std::string s(src.substr(i + 1, j - i - 1));
            i = j + 1;
            return s;
        }
        std::size_t j = i;
        while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                  src[j] == '-' || src[j] == '$' ||
                                  (src[j] == '.' && j + 1 < src.size() &&
                                   std::isdigit(static_cast<unsigned char>(src[j + 1])))))
            ++j;
        if (j == i) fail(std::string("unexpected character '") + src[i] + "'");
        std::string s(src.substr(i, j - i));
        i = j;
        return s;
    };
    while (true) {
        skip_ws();
        if (i >= src.size()) break;
        Statement st;
        st.line = line;
        st.functor = read_atom();
        skip_ws();
        if (i >= src.size() || src[i] != '(') fail("expected '(' after " + st.functor);
        ++i;
        while (true) {
            st.args.push_back(read_atom());
            skip_ws();
            if (i < src.size() && src[i] == ',') {
                ++i;
                continue;
            }
            if (i < src.size() && src[i] == ')') {
                ++i;
                break;
            }
            fail("expected ',' or ')'");
        }
        skip_ws();
        if (i >= src.size() || src[i] != '.') fail("expected '.' after " + st.functor);
        ++i;
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace

const char* pos_name(Pos p) {
    for (auto [k, n] : kPosNames)
        if (k == p) return n;
    return "?";
}

std::optional<Pos> pos_from(std::string_view s) {
    for (auto [k, n] : kPosNames)
        if (s == n) return k;
    return std::nullopt;
}

const char* gender_name(Gender g) { return g == Gender::m ? "m" : g == Gender::f ? "f" : "n"; }
const char* number_name(Number n) { return n == Number::sg ? "sg" : "pl"; }
const char* degree_name(Degree d) { return d == Degree::pos ? "pos" : d == Degree::comp ? "comp" : "sup"; }

std::string lowercase(std::string_view s) {
    std::string r(s);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
}

std::string Lexicon::find_root(const std::string& s) const {
    std::string cur = s;
    for (auto it = parent_.find(cur); it != parent_.end() && it->second != cur; it = parent_.find(cur))
        cur = it->second;
    return cur;
}

std::string Lexicon::synclass_of(std::string_view symbol) const { return find_root(std::string(symbol)); }

bool Lexicon::same_concept(std::string_view a, std::string_view b) const {
    return a == b || find_root(std::string(a)) == find_root(std::string(b));
}

void Lexicon::refresh_classes() {
    for (auto& e : entries_) e.synclass = find_root(e.symbol);
}

void Lexicon::add_synonym(std::string a, std::string b) {
    syn_pairs_.emplace_back(a, b);
    auto ra = find_root(a), rb = find_root(b);
    if (ra == rb) return;
    // smallest symbol is the class representative, so ids are order-independent
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
    parent_.try_emplace(ra, ra);
    refresh_classes();
}

bool Lexicon::is_illegal(std::string_view w) const { return illegal_.count(lowercase(w)) > 0; }

void Lexicon::add_illegal(std::string word) {
    word = lowercase(word);
    if (by_surface_.count(word))
        throw Error(Errc::validation, "surface '" + word + "' is declared both as an entry and illegal");
    illegal_.insert(std::move(word));
}

void Lexicon::add_entry(LexEntry e) {
    e.surface = lowercase(e.surface);
    if (e.surface.empty()) throw Error(Errc::validation, "empty surface");
    if (illegal_.count(e.surface))
        throw Error(Errc::validation, "surface '" + e.surface + "' is declared both as an entry and illegal");
    if (e.pos == Pos::noun || e.pos == Pos::pnoun) {
        if (!e.features.number) e.features.number = Number::sg;
        if (!e.features.gender) e.features.gender = Gender::n;
    }
    if ((e.pos == Pos::adv_comp) && !e.features.degree) e.features.degree = Degree::comp;
    if ((e.pos == Pos::adv_sup) && !e.features.degree) e.features.degree = Degree::sup;
    e.synclass = find_root(e.symbol);
    auto [lo, hi] = by_surface_.equal_range(e.surface);
    for (auto it = lo; it != hi; ++it) {
        if (entries_[it->second] == e) {
            warnings_.push_back("duplicate entry " + std::string(pos_name(e.pos)) + "(" + e.surface + ") ignored");
            return;
        }
    }
    int words = 1 + static_cast<int>(std::count(e.surface.begin(), e.surface.end(), ' '));
    max_words_ = std::max(max_words_, words);
    by_surface_.emplace(e.surface, entries_.size());
    entries_.push_back(std::move(e));
}

bool Lexicon::has_surface(std::string_view s) const { return by_surface_.count(lowercase(s)) > 0; }

std::vector<LexEntry> Lexicon::lookup(std::string_view surface) const {
    auto key = lowercase(surface);
    if (illegal_.count(key)) throw Error(Errc::illegal_word, "illegal word '" + key + "'");
    std::vector<LexEntry> out;
    auto [lo, hi] = by_surface_.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(entries_[it->second]);
    return out;
}

std::vector<std::size_t> Lexicon::lookup_ids(std::string_view surface) const {
    auto key = lowercase(surface);
    if (illegal_.count(key)) throw Error(Errc::illegal_word, "illegal word '" + key + "'");
    std::vector<std::size_t> out;
    auto [lo, hi] = by_surface_.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
}

std::size_t Lexicon::synonym_class_count() const {
    std::set<std::string> roots;
    for (const auto& [k, v] : parent_) roots.insert(find_root(k));
    return roots.size();
}

std::string Lexicon::serialize() const {
    std::ostringstream os;
    for (const auto& e : entries_) {
        os << pos_name(e.pos) << '(' << quote(e.surface) << ", " << quote(e.symbol);
        if (e.features.gender) os << ", " << gender_name(*e.features.gender);
        if (e.features.number) os << ", " << number_name(*e.features.number);
        if (e.features.degree) os << ", " << degree_name(*e.features.degree);
        os << ").\n";
    }
    for (const auto& [a, b] : syn_pairs_) os << "syn(" << quote(a) << ", " << quote(b) << ").\n";
    for (const auto& w : illegal_) os << "illegal(" << quote(w) << ").\n";
    return os.str();
}

bool operator==(const Lexicon& a, const Lexicon& b) {
    if (a.entries_ != b.entries_ || a.illegal_ != b.illegal_) return false;
    std::set<std::string> syms;
    for (const auto& [k, v] : a.parent_) syms.insert(k);
    for (const auto& [k, v] : b.parent_) syms.insert(k);
    for (const auto& s : syms)
        if (a.find_root(s) != b.find_root(s)) return false;
    return true;
}

Lexicon load_lexicon(std::string_view source) {
    Lexicon lex;
    auto statements = split_statements(source);
    // illegal words first so entry validation sees them regardless of order
    for (const auto& st : statements) {
        if (st.functor != "illegal") continue;
        if (st.args.size() != 1)
            throw Error(Errc::parse, "lexicon line " + std::to_string(st.line) + ": illegal/1 expects one word");
        lex.add_illegal(st.args[0]);
    }
    for (const auto& st : statements) {
        auto where = "lexicon line " + std::to_string(st.line) + ": ";
        if (st.functor == "illegal") continue;
        if (st.functor == "syn") {
            if (st.args.size() != 2) throw Error(Errc::parse, where + "syn/2 expects two symbols");
            lex.add_synonym(st.args[0], st.args[1]);
            continue;
        }
        auto pos = pos_from(st.functor);
        if (!pos) throw Error(Errc::parse, where + "unknown category '" + st.functor + "'");
        if (st.args.size() < 2) throw Error(Errc::parse, where + "entry needs surface and symbol");
        LexEntry e;
        e.surface = st.args[0];
        e.pos = *pos;
        e.symbol = st.args[1];
        for (std::size_t k = 2; k < st.args.size(); ++k) {
            const auto& f = st.args[k];
            if (f == "m") e.features.gender = Gender::m;
            else if (f == "f") e.features.gender = Gender::f;
            else if (f == "n") e.features.gender = Gender::n;
            else if (f == "sg") e.features.number = Number::sg;
            else if (f == "pl") e.features.number = Number::pl;
            else if (f == "pos") e.features.degree = Degree::pos;
            else if (f == "comp") e.features.degree = Degree::comp;
            else if (f == "sup") e.features.degree = Degree::sup;
            else lex.warn(where + "feature '" + f + "' ignored");
        }
        lex.add_entry(std::move(e));
    }
    return lex;
}

Lexicon load_lexicon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open lexicon " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_lexicon(ss.str());
}

} // namespace cnl
