#include "cnlkit/minmodel.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>

namespace cnl::circ {

namespace {

std::string pred_of(const std::string& atom) {
    auto p = atom.find('(');
    return p == std::string::npos ? atom : atom.substr(0, p);
}

std::string strip_arity(std::string p) {
    auto slash = p.find('/');
    if (slash != std::string::npos) p.resize(slash);
    return p;
}

// Atom text with whitespace removed: name or name(args...).
class Scanner {
public:
    Scanner(std::string_view s, int line) : s_(s), line_(line) {}

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool done() {
        skip();
        return i_ >= s_.size();
    }
    bool accept(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    std::string word() {
        skip();
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '/')) ++j;
        if (j == i_) fail("expected a name");
        std::string w(s_.substr(i_, j - i_));
        i_ = j;
        return w;
    }
    std::string atom() {
        std::string a = word();
        if (peek() != '(') return a;
        int depth = 0;
        do {
            char c = s_[i_++];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (!std::isspace(static_cast<unsigned char>(c))) a += c;
        } while (depth > 0 && i_ < s_.size());
        if (depth) fail("unbalanced parentheses");
        return a;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse, "line " + std::to_string(line_) + ": " + what);
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
    int line_;
};

Model compact(Model m, const std::vector<int>& bits) {
    Model out = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if ((m >> bits[k]) & 1u) out |= Model{1} << k;
    return out;
}

std::vector<int> bits_of(Model mask) {
    std::vector<int> out;
    for (int i = 0; i < kMaxAtoms; ++i)
        if ((mask >> i) & 1u) out.push_back(i);
    return out;
}

Formula parse_or(Scanner& s, const GroundTheory& t);

Formula parse_unary(Scanner& s, const GroundTheory& t) {
    if (s.accept('-')) {
        Formula f;
        f.kind = Formula::Kind::neg;
        f.kids.push_back(parse_unary(s, t));
        return f;
    }
    if (s.accept('(')) {
        Formula f = parse_or(s, t);
        if (!s.accept(')')) s.fail("expected ')'");
        return f;
    }
    std::string a = s.atom();
    Formula f;
    f.atom = t.find(a);
    if (f.atom < 0) throw Error(Errc::validation, "atom '" + a + "' is not in the theory's universe");
    return f;
}

Formula parse_and(Scanner& s, const GroundTheory& t) {
    Formula f = parse_unary(s, t);
    if (s.peek() != '&') return f;
    Formula c;
    c.kind = Formula::Kind::conj;
    c.kids.push_back(std::move(f));
    while (s.accept('&')) c.kids.push_back(parse_unary(s, t));
    return c;
}

Formula parse_or(Scanner& s, const GroundTheory& t) {
    Formula f = parse_and(s, t);
    if (s.peek() != '|') return f;
    Formula d;
    d.kind = Formula::Kind::disj;
    d.kids.push_back(std::move(f));
    while (s.accept('|')) d.kids.push_back(parse_and(s, t));
    return d;
}

} // namespace

int GroundTheory::atom(std::string_view text) {
    int id = find(text);
    if (id >= 0) return id;
    if (size() >= kMaxAtoms)
        throw Error(Errc::size, "ground theory exceeds " + std::to_string(kMaxAtoms) + " atoms");
    atoms_.emplace_back(text);
    return size() - 1;
}

int GroundTheory::find(std::string_view text) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), text);
    return it == atoms_.end() ? -1 : static_cast<int>(it - atoms_.begin());
}

Model GroundTheory::pred_mask(const std::set<std::string>& preds) const {
    Model m = 0;
    for (int i = 0; i < size(); ++i)
        if (preds.count(pred_of(atoms_[static_cast<std::size_t>(i)]))) m |= Model{1} << i;
    return m;
}

Model GroundTheory::minimized_mask() const {
    for (const auto& p : minimized_)
        if (varied_.count(p)) throw Error(Errc::validation, "predicate '" + p + "' is both minimized and varied");
    return pred_mask(minimized_);
}

Model GroundTheory::varied_mask() const { return pred_mask(varied_); }

Model GroundTheory::fixed_mask() const {
    Model all = size() == 32 ? ~Model{0} : ((Model{1} << size()) - 1);
    return all & ~minimized_mask() & ~varied_mask();
}

bool GroundTheory::satisfies(Model m) const {
    return std::all_of(clauses_.begin(), clauses_.end(), [m](const Clause& c) { return c.satisfied(m); });
}

std::vector<std::string> GroundTheory::true_atoms(Model m) const {
    std::vector<std::string> out;
    for (int i = 0; i < size(); ++i)
        if ((m >> i) & 1u) out.push_back(atoms_[static_cast<std::size_t>(i)]);
    return out;
}

GroundTheory parse_theory(std::string_view text) {
    GroundTheory t;
    int line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view ln = text.substr(start, end - start);
        start = end + 1;
        ++line;
        if (auto pct = ln.find('%'); pct != std::string_view::npos) ln = ln.substr(0, pct);
        Scanner s(ln, line);
        if (s.done()) continue;
        if (s.accept('#')) {
            std::string dir = s.word();
            do {
                std::string arg = s.atom();
                if (dir == "minimize") t.minimize(strip_arity(arg));
                else if (dir == "vary") t.vary(strip_arity(arg));
                else if (dir == "atom") t.atom(arg);
                else s.fail("unknown directive #" + dir);
            } while (s.accept(','));
        } else {
            Clause c;
            do {
                bool negative = s.accept('-');
                Model bit = Model{1} << t.atom(s.atom());
                (negative ? c.neg : c.pos) |= bit;
            } while (s.accept('|'));
            t.add_clause(c);
        }
        if (!s.accept('.')) s.fail("expected '.'");
        if (!s.done()) s.fail("trailing input");
    }
    t.minimized_mask();
    return t;
}

bool Formula::holds(Model m) const {
    switch (kind) {
    case Kind::atom: return (m >> atom) & 1u;
    case Kind::neg: return !kids[0].holds(m);
    case Kind::conj:
        return std::all_of(kids.begin(), kids.end(), [m](const Formula& f) { return f.holds(m); });
    case Kind::disj:
        return std::any_of(kids.begin(), kids.end(), [m](const Formula& f) { return f.holds(m); });
    }
    return false;
}

Formula parse_formula(std::string_view text, const GroundTheory& t) {
    Scanner s(text, 1);
    Formula f = parse_or(s, t);
    s.accept('.');
    if (!s.done()) s.fail("trailing input in formula");
    return f;
}

std::vector<Model> classical_models(const GroundTheory& t) {
    std::vector<Model> out;
    const Model n = Model{1} << t.size();
    for (Model m = 0; m < n; ++m)
        if (t.satisfies(m)) out.push_back(m);
    return out;
}

std::vector<Model> minimal_models_reference(const GroundTheory& t) {
    const Model P = t.minimized_mask(), F = t.fixed_mask();
    auto models = classical_models(t);
    std::vector<Model> out;
    for (Model m : models) {
        bool minimal = true;
        for (Model o : models) {
            if ((o & F) != (m & F)) continue;
            Model op = o & P, mp = m & P;
            if (op != mp && (op & ~mp) == 0) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(m);
    }
    return out;
}

std::vector<Model> minimal_models(const GroundTheory& t) {
    const Model P = t.minimized_mask(), F = t.fixed_mask();
    const auto pbits = bits_of(P), fbits = bits_of(F);
    const int kp = static_cast<int>(pbits.size());
    const long long n = 1LL << t.size();
    const long long cells = 1LL << (pbits.size() + fbits.size());
    const auto& clauses = t.clauses();

    // sat[m]: m is a model. down[(f,p)]: some model with fixed part f has P-part within p.
    std::vector<unsigned char> sat(static_cast<std::size_t>(n), 0), down(static_cast<std::size_t>(cells), 0);
    auto cell = [&](Model m) { return (static_cast<long long>(compact(m, fbits)) << kp) | compact(m, pbits); };

#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        const Model m = static_cast<Model>(i);
        bool ok = true;
        for (const auto& c : clauses)
            if (!c.satisfied(m)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        sat[static_cast<std::size_t>(i)] = 1;
#pragma omp atomic write
        down[static_cast<std::size_t>(cell(m))] = 1;
    }

    // Zeta transform over the P coordinates: close each cell under supersets.
    for (int b = 0; b < kp; ++b) {
        const long long bit = 1LL << b;
#pragma omp parallel for schedule(static)
        for (long long c = 0; c < cells; ++c)
            if ((c & bit) && down[static_cast<std::size_t>(c ^ bit)]) down[static_cast<std::size_t>(c)] = 1;
    }

    std::vector<unsigned char> minimal(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        if (!sat[static_cast<std::size_t>(i)]) continue;
        const long long c = cell(static_cast<Model>(i));
        bool ok = true;
        for (int b = 0; b < kp && ok; ++b) {
            const long long bit = 1LL << b;
            if ((c & bit) && down[static_cast<std::size_t>(c ^ bit)]) ok = false;
        }
        minimal[static_cast<std::size_t>(i)] = ok;
    }

    std::vector<Model> out;
    for (long long i = 0; i < n; ++i)
        if (minimal[static_cast<std::size_t>(i)]) out.push_back(static_cast<Model>(i));
    return out;
}

bool circ_entails(const GroundTheory& t, const Formula& phi) {
    auto ms = minimal_models(t);
    return std::all_of(ms.begin(), ms.end(), [&](Model m) { return phi.holds(m); });
}

bool circ_entails(const GroundTheory& t, std::string_view phi) { return circ_entails(t, parse_formula(phi, t)); }

} // namespace cnl::circ
