#include "cnlkit/chart.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace cnl {

namespace {

constexpr const char* kNumberValues[] = {"sg", "pl"};
constexpr const char* kGenderValues[] = {"m", "f", "n"};
constexpr const char* kDegreeValues[] = {"pos", "comp", "sup"};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

bool upper_initial(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

// One alternative before optional expansion: symbols, with optional groups marked.
struct RawElement {
    std::vector<std::string> symbols;
    bool optional = false;
};

struct RawAlternative {
    std::vector<RawElement> elements;
    std::string constraints;
};

struct SlotRef {
    std::string name;   // "^" for lhs
    int occurrence = 1;
    Feat feat = Feat::number;
};

struct RawEquation {
    SlotRef left;
    std::optional<SlotRef> right;
    std::uint8_t value = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error(Errc::parse, "grammar line " + std::to_string(line) + ": " + msg);
}

std::optional<Feat> feat_from(std::string_view s) {
    if (s == "number") return Feat::number;
    if (s == "gender") return Feat::gender;
    if (s == "degree") return Feat::degree;
    return std::nullopt;
}

SlotRef parse_slot(const std::string& text, int line) {
    auto dot = text.rfind('.');
    if (dot == std::string::npos) fail(line, "expected Symbol.feature in '" + text + "'");
    SlotRef r;
    std::string sym = text.substr(0, dot);
    auto feat = feat_from(text.substr(dot + 1));
    if (!feat) fail(line, "undeclared feature '" + text.substr(dot + 1) + "'");
    r.feat = *feat;
    auto hash = sym.find('#');
    if (hash != std::string::npos) {
        r.occurrence = std::stoi(sym.substr(hash + 1));
        sym = sym.substr(0, hash);
    }
    r.name = sym;
    return r;
}

std::vector<RawEquation> parse_constraints(const std::string& text, int line) {
    std::vector<RawEquation> out;
    std::string cur;
    auto flush = [&] {
        auto t = trim(cur);
        cur.clear();
        if (t.empty()) return;
        auto eq = t.find('=');
        if (eq == std::string::npos) fail(line, "expected '=' in constraint '" + t + "'");
        RawEquation e;
        e.left = parse_slot(trim(t.substr(0, eq)), line);
        auto rhs = trim(t.substr(eq + 1));
        if (rhs.find('.') != std::string::npos) {
            e.right = parse_slot(rhs, line);
            if (e.right->feat != e.left.feat) fail(line, "constraint equates different features");
        } else {
            e.value = feat_code(e.left.feat, rhs);
            if (e.value == 0) fail(line, "value '" + rhs + "' is not a " + feat_name(e.left.feat));
        }
        out.push_back(std::move(e));
    };
    for (char c : text) {
        if (c == ',' || c == ';') flush();
        else cur.push_back(c);
    }
    flush();
    return out;
}

std::vector<RawAlternative> parse_rhs(const std::string& rhs, int line) {
    std::vector<RawAlternative> alts(1);
    std::string plain;
    auto flush_plain = [&] {
        for (auto& w : words(plain)) {
            if (w == "|") {
                alts.emplace_back();
                continue;
            }
            alts.back().elements.push_back({{w}, false});
        }
        plain.clear();
    };
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (rhs[i] != '{') {
            plain.push_back(rhs[i]);
            continue;
        }
        flush_plain();
        auto close = rhs.find('}', i);
        if (close == std::string::npos) fail(line, "unbalanced '{'");
        std::string inner = rhs.substr(i + 1, close - i - 1);
        if (inner.find('=') != std::string::npos) {
            if (!alts.back().constraints.empty()) alts.back().constraints += ",";
            alts.back().constraints += inner;
        } else {
            auto syms = words(inner);
            if (syms.empty()) fail(line, "empty optional group");
            alts.back().elements.push_back({syms, true});
        }
        i = close;
    }
    flush_plain();
    return alts;
}

} // namespace

const char* feat_name(Feat f) {
    switch (f) {
    case Feat::number: return "number";
    case Feat::gender: return "gender";
    case Feat::degree: return "degree";
    }
    return "?";
}

std::uint8_t feat_code(Feat f, std::string_view v) {
    auto find = [&](auto& table) -> std::uint8_t {
        for (std::size_t i = 0; i < std::size(table); ++i)
            if (v == table[i]) return static_cast<std::uint8_t>(i + 1);
        return 0;
    };
    switch (f) {
    case Feat::number: return find(kNumberValues);
    case Feat::gender: return find(kGenderValues);
    case Feat::degree: return find(kDegreeValues);
    }
    return 0;
}

std::string feat_value_name(Feat f, std::uint8_t code) {
    if (code == 0) return "_";
    switch (f) {
    case Feat::number: return kNumberValues[code - 1];
    case Feat::gender: return kGenderValues[code - 1];
    case Feat::degree: return kDegreeValues[code - 1];
    }
    return "?";
}

bool Grammar::is_pos_category(const std::string& s) const { return pos_from(s).has_value() || s == "sid"; }

bool Grammar::is_lexical(const std::string& s) const {
    return is_pos_category(s) || is_terminal(s) || pre_by_lhs_.count(s) > 0;
}

const std::vector<int>& Grammar::phrasal_of(const std::string& lhs) const {
    static const std::vector<int> none;
    auto it = phrasal_.find(lhs);
    return it == phrasal_.end() ? none : it->second;
}

const std::vector<int>& Grammar::preterminals_for(const std::string& word) const {
    static const std::vector<int> none;
    auto it = pre_by_word_.find(word);
    return it == pre_by_word_.end() ? none : it->second;
}

const std::vector<int>& Grammar::preterminals_of(const std::string& lhs) const {
    static const std::vector<int> none;
    auto it = pre_by_lhs_.find(lhs);
    return it == pre_by_lhs_.end() ? none : it->second;
}

Grammar compile_grammar(std::string_view source) {
    struct Pending {
        std::string lhs;
        RawAlternative alt;
        int line;
    };
    std::vector<Pending> pending;
    std::istringstream in{std::string(source)};
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto pct = line.find('%'); pct != std::string::npos) line = line.substr(0, pct);
        if (trim(line).empty()) continue;
        auto arrow = line.find("->");
        if (arrow == std::string::npos) fail(line_no, "expected '->'");
        auto lhs = trim(line.substr(0, arrow));
        if (lhs.empty() || lhs.find(' ') != std::string::npos || !upper_initial(lhs))
            fail(line_no, "left-hand side must be one capitalised category");
        for (auto& alt : parse_rhs(line.substr(arrow + 2), line_no)) pending.push_back({lhs, std::move(alt), line_no});
    }
    if (pending.empty()) throw Error(Errc::parse, "grammar has no start symbol");

    Grammar g;
    g.start_ = pending.front().lhs;
    for (const auto& p : pending) g.lhs_set_.insert(p.lhs);

    for (const auto& p : pending) {
        auto equations = parse_constraints(p.alt.constraints, p.line);
        std::vector<std::string> all_symbols;
        for (const auto& el : p.alt.elements)
            for (const auto& s : el.symbols) all_symbols.push_back(s);
        std::vector<std::size_t> optional_idx;
        for (std::size_t i = 0; i < p.alt.elements.size(); ++i)
            if (p.alt.elements[i].optional) optional_idx.push_back(i);
        const std::size_t variants = std::size_t{1} << optional_idx.size();
        for (std::size_t mask = 0; mask < variants; ++mask) {
            Production prod;
            prod.lhs = p.lhs;
            prod.line = p.line;
            for (std::size_t i = 0; i < p.alt.elements.size(); ++i) {
                const auto& el = p.alt.elements[i];
                if (el.optional) {
                    auto bit = std::find(optional_idx.begin(), optional_idx.end(), i) - optional_idx.begin();
                    if (!(mask & (std::size_t{1} << bit))) continue;
                }
                for (const auto& s : el.symbols) prod.rhs.push_back(s);
            }
            if (prod.rhs.empty()) fail(p.line, "empty production for " + p.lhs);

            auto resolve_slot = [&](const SlotRef& r, std::optional<Slot>& out) {
                if (r.name == "^") {
                    out = Slot{0, r.feat};
                    return;
                }
                int seen = 0;
                for (std::size_t k = 0; k < prod.rhs.size(); ++k) {
                    if (prod.rhs[k] == r.name && ++seen == r.occurrence) {
                        out = Slot{static_cast<int>(k) + 1, r.feat};
                        return;
                    }
                }
                if (r.name == p.lhs && r.occurrence == 1 &&
                    std::find(all_symbols.begin(), all_symbols.end(), r.name) == all_symbols.end()) {
                    out = Slot{0, r.feat};
                    return;
                }
                if (std::find(all_symbols.begin(), all_symbols.end(), r.name) == all_symbols.end())
                    fail(p.line, "constraint refers to unknown symbol '" + r.name + "'");
                out.reset();  // optional symbol absent in this variant
            };
            for (const auto& e : equations) {
                std::optional<Slot> l, r;
                resolve_slot(e.left, l);
                if (e.right) resolve_slot(*e.right, r);
                if (!l || (e.right && !r)) continue;
                Equation eq;
                eq.left = *l;
                eq.right = r;
                eq.value = e.value;
                prod.equations.push_back(eq);
            }

            // feature classes by union-find over (position, feat) slots
            const int n = static_cast<int>(prod.rhs.size()) + 1;
            std::vector<int> parent(static_cast<std::size_t>(n * kFeatCount));
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> root = [&](int x) {
                while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
                return x;
            };
            auto idx = [](const Slot& s) { return s.position * kFeatCount + static_cast<int>(s.feat); };
            std::vector<bool> used(parent.size(), false);
            for (const auto& e : prod.equations) {
                used[static_cast<std::size_t>(idx(e.left))] = true;
                if (e.right) {
                    used[static_cast<std::size_t>(idx(*e.right))] = true;
                    int a = root(idx(e.left)), b = root(idx(*e.right));
                    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
                }
            }
            std::vector<int> class_of_root(parent.size(), -1);
            prod.slot_class.assign(static_cast<std::size_t>(n), {-1, -1, -1});
            for (int s = 0; s < static_cast<int>(parent.size()); ++s) {
                if (!used[static_cast<std::size_t>(s)]) continue;
                int r = root(s);
                if (class_of_root[static_cast<std::size_t>(r)] < 0) {
                    class_of_root[static_cast<std::size_t>(r)] = static_cast<int>(prod.class_feat.size());
                    prod.class_feat.push_back(static_cast<Feat>(s % kFeatCount));
                    prod.class_const.push_back(0);
                }
                prod.slot_class[static_cast<std::size_t>(s / kFeatCount)][static_cast<std::size_t>(s % kFeatCount)] =
                    class_of_root[static_cast<std::size_t>(r)];
            }
            for (const auto& e : prod.equations) {
                if (e.right) continue;
                int c = prod.cls(e.left.position, e.left.feat);
                auto& v = prod.class_const[static_cast<std::size_t>(c)];
                if (v != 0 && v != e.value) fail(p.line, "contradictory feature constants");
                v = e.value;
            }

            for (const auto& s : prod.rhs)
                if (upper_initial(s) && !g.lhs_set_.count(s)) fail(p.line, "undefined category '" + s + "'");
            prod.preterminal = prod.rhs.size() == 1 && !g.lhs_set_.count(prod.rhs[0]) && !upper_initial(prod.rhs[0]) &&
                               !g.is_pos_category(prod.rhs[0]);
            prod.id = static_cast<int>(g.productions_.size());
            g.productions_.push_back(std::move(prod));
        }
    }

    for (const auto& prod : g.productions_) {
        if (prod.preterminal) {
            g.pre_by_word_[lowercase(prod.rhs[0])].push_back(prod.id);
            g.pre_by_lhs_[prod.lhs].push_back(prod.id);
            continue;
        }
        g.phrasal_[prod.lhs].push_back(prod.id);
        for (const auto& s : prod.rhs)
            if (!g.lhs_set_.count(s) && !g.is_pos_category(s)) g.terminals_.insert(lowercase(s));
    }

    // Reject unit cycles and left recursion: both make top-down prediction loop.
    auto find_cycle = [&](bool unit_only) -> std::optional<std::string> {
        std::map<std::string, std::set<std::string>> next;
        for (const auto& prod : g.productions_) {
            if (prod.preterminal) continue;
            if (unit_only && prod.rhs.size() != 1) continue;
            if (g.lhs_set_.count(prod.rhs[0])) next[prod.lhs].insert(prod.rhs[0]);
        }
        std::map<std::string, int> state;
        std::vector<std::string> path;
        std::optional<std::string> found;
        std::function<void(const std::string&)> dfs = [&](const std::string& a) {
            if (found) return;
            state[a] = 1;
            path.push_back(a);
            for (const auto& b : next[a]) {
                if (state[b] == 1) {
                    std::string cyc;
                    auto it = std::find(path.begin(), path.end(), b);
                    for (; it != path.end(); ++it) cyc += *it + " -> ";
                    found = cyc + b;
                    return;
                }
                if (state[b] == 0) dfs(b);
                if (found) return;
            }
            path.pop_back();
            state[a] = 2;
        };
        for (const auto& lhs : g.lhs_set_)
            if (state[lhs] == 0) dfs(lhs);
        return found;
    };
    if (auto c = find_cycle(true)) throw Error(Errc::parse, "cyclic unit productions: " + *c);
    if (auto c = find_cycle(false)) throw Error(Errc::parse, "left recursion: " + *c);
    return g;
}

Grammar load_grammar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open grammar " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return compile_grammar(ss.str());
}

} // namespace cnl
