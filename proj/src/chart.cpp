#include "cnlkit/chart.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace cnl {

namespace {

std::vector<std::uint8_t> entry_features(const LexEntry& e) {
    std::vector<std::uint8_t> v(kFeatCount, 0);
    if (e.features.number) v[0] = static_cast<std::uint8_t>(*e.features.number) + 1;
    if (e.features.gender) v[1] = static_cast<std::uint8_t>(*e.features.gender) + 1;
    if (e.features.degree) v[2] = static_cast<std::uint8_t>(*e.features.degree) + 1;
    return v;
}

// Feature values a preterminal production assigns to its lhs.
std::vector<std::uint8_t> lhs_constants(const Production& p) {
    std::vector<std::uint8_t> v(kFeatCount, 0);
    for (int f = 0; f < kFeatCount; ++f) {
        int c = p.cls(0, static_cast<Feat>(f));
        if (c >= 0) v[static_cast<std::size_t>(f)] = p.class_const[static_cast<std::size_t>(c)];
    }
    return v;
}

bool compatible(const std::vector<std::uint8_t>& have, const std::vector<std::uint8_t>& want) {
    for (int f = 0; f < kFeatCount; ++f) {
        auto a = have[static_cast<std::size_t>(f)], b = want[static_cast<std::size_t>(f)];
        if (a && b && a != b) return false;
    }
    return true;
}

} // namespace

bool is_number_token(std::string_view tok) {
    if (!tok.empty() && tok[0] == '$') tok.remove_prefix(1);
    if (tok.empty()) return false;
    bool dot = false, digit = false;
    for (std::size_t i = 0; i < tok.size(); ++i) {
        char c = tok[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digit = true;
        } else if (c == '.' && !dot && digit && i + 1 < tok.size()) {
            dot = true;
        } else {
            return false;
        }
    }
    return digit;
}

bool is_sid_token(std::string_view tok) {
    if (is_number_token(tok) || tok.size() < 3) return false;
    auto dot = tok.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == tok.size()) return false;
    for (char c : tok)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_') return false;
    return true;
}

bool Edge::active(const Grammar& g) const {
    return kind == LexKind::phrasal && dot < static_cast<int>(g.production(prod).rhs.size());
}

const std::string* Edge::next(const Grammar& g) const {
    if (!active(g)) return nullptr;
    return &g.production(prod).rhs[static_cast<std::size_t>(dot)];
}

std::string Edge::identity() const {
    std::ostringstream os;
    os << from << ' ' << to << ' ' << static_cast<int>(kind) << ' ' << cat << ' ' << prod << ' ' << dot << ' '
       << entry << ' ';
    for (auto b : bind) os << static_cast<int>(b);
    return os.str();
}

std::string Tree::str() const {
    if (leaf()) return category + "(" + word + ")";
    std::string s = category + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) s += ",";
        s += children[i].str();
    }
    return s + ")";
}

std::vector<const Edge*> Chart::edges() const {
    std::vector<const Edge*> out;
    for (std::size_t i = 0; i < store_.size(); ++i)
        if (alive_[i]) out.push_back(&store_[i]);
    return out;
}

std::set<std::string> Chart::identity_set() const {
    std::set<std::string> out;
    for (const Edge* e : edges()) out.insert(e->identity());
    return out;
}

std::vector<const Edge*> Chart::spanning() const {
    std::vector<const Edge*> out;
    const int n = static_cast<int>(tokens_.size());
    for (const Edge* e : edges())
        if (e->kind == LexKind::phrasal && !e->active(*g_) && e->from == 0 && e->to == n && e->cat == g_->start())
            out.push_back(e);
    return out;
}

std::string Chart::dump() const {
    std::ostringstream os;
    for (const Edge* e : edges()) {
        os << 'e' << e->id << ' ' << e->from << ' ' << e->to << ' ' << e->cat << " ->";
        if (e->kind == LexKind::phrasal) {
            const auto& rhs = g_->production(e->prod).rhs;
            for (std::size_t k = 0; k <= rhs.size(); ++k) {
                if (static_cast<int>(k) == e->dot) os << " \xE2\x80\xA2";
                if (k < rhs.size()) os << ' ' << rhs[k];
            }
        } else {
            os << ' ' << tokens_[static_cast<std::size_t>(e->from)] << " \xE2\x80\xA2";
        }
        os << " [";
        for (std::size_t k = 0; k < e->deps.size(); ++k) os << (k ? " " : "") << 'e' << e->deps[k];
        os << "]\n";
    }
    return os.str();
}

int Chart::add_edge(Edge e) {
    auto key = e.identity();
    if (!seen_.insert(key).second) return 0;
    e.id = static_cast<int>(store_.size()) + 1;
    if (e.kind == LexKind::phrasal && e.active(*g_)) {
        active_at_[{e.to, *e.next(*g_)}].push_back(e.id);
    } else {
        inactive_at_[{e.from, e.cat}].push_back(e.id);
    }
    store_.push_back(std::move(e));
    alive_.push_back(true);
    return store_.back().id;
}

void Chart::add_lexical(int position) {
    const auto& tok = tokens_[static_cast<std::size_t>(position)];
    auto lower = lowercase(tok);
    bool any = false;
    auto base = [&](LexKind k, std::string cat) {
        Edge e;
        e.from = position;
        e.to = position + 1;
        e.kind = k;
        e.cat = std::move(cat);
        e.bind.assign(kFeatCount, 0);
        return e;
    };
    if (is_number_token(tok)) {
        add_edge(base(LexKind::number, "num"));
        any = true;
    } else if (is_sid_token(tok)) {
        add_edge(base(LexKind::sid, "sid"));
        any = true;
    }
    for (auto idx : lex_->lookup_ids(tok)) {
        const auto& entry = lex_->entries()[idx];
        Edge e = base(LexKind::entry, pos_name(entry.pos));
        e.entry = static_cast<int>(idx);
        e.bind = entry_features(entry);
        add_edge(std::move(e));
        any = true;
    }
    for (int pid : g_->preterminals_for(lower)) {
        const auto& p = g_->production(pid);
        Edge e = base(LexKind::preterminal, p.lhs);
        e.prod = pid;
        e.bind = lhs_constants(p);
        add_edge(std::move(e));
        any = true;
    }
    if (g_->is_terminal(lower)) {
        add_edge(base(LexKind::terminal, lower));
        any = true;
    }
    if (!any)
        throw Error(Errc::unknown_word, "unknown word '" + tok + "' at position " + std::to_string(position));
}

std::vector<std::uint8_t> Chart::exported(const Edge& e) const {
    if (e.kind != LexKind::phrasal) return e.bind;
    const auto& p = g_->production(e.prod);
    std::vector<std::uint8_t> v(kFeatCount, 0);
    for (int f = 0; f < kFeatCount; ++f) {
        int c = p.cls(0, static_cast<Feat>(f));
        if (c >= 0) v[static_cast<std::size_t>(f)] = e.bind[static_cast<std::size_t>(c)];
    }
    return v;
}

void Chart::combine(const Edge& a, const Edge& in) {
    const auto& p = g_->production(a.prod);
    auto vals = exported(in);
    auto nb = a.bind;
    for (int f = 0; f < kFeatCount; ++f) {
        int c = p.cls(a.dot + 1, static_cast<Feat>(f));
        auto v = vals[static_cast<std::size_t>(f)];
        if (c < 0 || v == 0) continue;
        auto& slot = nb[static_cast<std::size_t>(c)];
        if (slot == 0) slot = v;
        else if (slot != v) return;
    }
    Edge e;
    e.from = a.from;
    e.to = in.to;
    e.prod = a.prod;
    e.dot = a.dot + 1;
    e.cat = a.cat;
    e.bind = std::move(nb);
    e.deps = {a.id, in.id};
    bool act = e.active(*g_);
    int id = add_edge(std::move(e));
    if (!id) return;
    if (act) agenda_.push_back(id);
    else process_inactive(id);
}

void Chart::predict(const Edge& a) {
    const std::string& x = *a.next(*g_);
    const auto& pa = g_->production(a.prod);
    for (int pid : g_->phrasal_of(x)) {
        const auto& p = g_->production(pid);
        auto bind = p.class_const;
        bool ok = true;
        for (int f = 0; f < kFeatCount && ok; ++f) {
            int ca = pa.cls(a.dot + 1, static_cast<Feat>(f));
            if (ca < 0 || a.bind[static_cast<std::size_t>(ca)] == 0) continue;
            int cp = p.cls(0, static_cast<Feat>(f));
            if (cp < 0) continue;
            auto& slot = bind[static_cast<std::size_t>(cp)];
            auto v = a.bind[static_cast<std::size_t>(ca)];
            if (slot == 0) slot = v;
            else if (slot != v) ok = false;
        }
        if (!ok) continue;
        Edge e;
        e.from = a.to;
        e.to = a.to;
        e.prod = pid;
        e.dot = 0;
        e.cat = p.lhs;
        e.bind = std::move(bind);
        e.deps = {a.id};
        int id = add_edge(std::move(e));
        if (id) agenda_.push_back(id);
    }
}

void Chart::process_active(int id) {
    Edge a = store_[static_cast<std::size_t>(id - 1)];
    if (!alive_[static_cast<std::size_t>(id - 1)]) return;
    predict(a);
    auto key = std::make_pair(a.to, *a.next(*g_));
    for (std::size_t i = 0; i < inactive_at_[key].size(); ++i) {
        int iid = inactive_at_[key][i];
        if (!alive_[static_cast<std::size_t>(iid - 1)]) continue;
        Edge in = store_[static_cast<std::size_t>(iid - 1)];
        combine(a, in);
    }
}

void Chart::process_inactive(int id) {
    Edge in = store_[static_cast<std::size_t>(id - 1)];
    auto key = std::make_pair(in.from, in.cat);
    for (std::size_t i = 0; i < active_at_[key].size(); ++i) {
        int aid = active_at_[key][i];
        if (!alive_[static_cast<std::size_t>(aid - 1)]) continue;
        Edge a = store_[static_cast<std::size_t>(aid - 1)];
        combine(a, in);
    }
}

void Chart::close() {
    while (!agenda_.empty()) {
        int id = agenda_.back();
        agenda_.pop_back();
        process_active(id);
    }
}

void Chart::reindex() {
    seen_.clear();
    active_at_.clear();
    inactive_at_.clear();
    for (std::size_t i = 0; i < store_.size(); ++i) {
        if (!alive_[i]) continue;
        const Edge& e = store_[i];
        seen_.insert(e.identity());
        if (e.kind == LexKind::phrasal && e.active(*g_)) active_at_[{e.to, *e.next(*g_)}].push_back(e.id);
        else inactive_at_[{e.from, e.cat}].push_back(e.id);
    }
}

Chart parse(const Grammar& g, const Lexicon& lex, std::vector<std::string> tokens) {
    Chart c;
    c.g_ = &g;
    c.lex_ = &lex;
    c.tokens_ = std::move(tokens);
    for (int pid : g.phrasal_of(g.start())) {
        const auto& p = g.production(pid);
        Edge e;
        e.prod = pid;
        e.cat = p.lhs;
        e.bind = p.class_const;
        int id = c.add_edge(std::move(e));
        if (id) c.agenda_.push_back(id);
    }
    for (int i = 0; i < static_cast<int>(c.tokens_.size()); ++i) c.add_lexical(i);
    c.close();
    return c;
}

bool sentence_complete(const Chart& c) { return !c.spanning().empty(); }

Chart apply_edit(Chart c, const EditOp& op, const Grammar& g, const Lexicon& lex) {
    const int n = static_cast<int>(c.tokens_.size());
    const int p = op.position;
    bool in_bounds = op.kind == EditOp::Kind::insert ? (p >= 0 && p <= n) : (p >= 0 && p < n);
    if (!in_bounds) throw Error(Errc::bounds, "edit position " + std::to_string(p) + " out of bounds");
    c.g_ = &g;
    c.lex_ = &lex;

    // Edges triggered, directly or transitively, by the lexical edges at p.
    std::vector<bool> changed(c.store_.size(), false);
    for (std::size_t i = 0; i < c.store_.size(); ++i)
        if (c.alive_[i] && c.store_[i].lexical() && c.store_[i].from == p) changed[i] = true;
    std::vector<bool> dead(c.store_.size(), false);
    for (std::size_t i = 0; i < c.store_.size(); ++i) {
        if (!c.alive_[i]) continue;
        for (int d : c.store_[i].deps) {
            auto di = static_cast<std::size_t>(d - 1);
            if (changed[di] || dead[di]) {
                dead[i] = true;
                break;
            }
        }
    }
    if (op.kind != EditOp::Kind::insert)
        for (std::size_t i = 0; i < c.store_.size(); ++i)
            if (changed[i]) dead[i] = true;
    for (std::size_t i = 0; i < c.store_.size(); ++i)
        if (dead[i]) c.alive_[i] = false;

    switch (op.kind) {
    case EditOp::Kind::insert:
        c.tokens_.insert(c.tokens_.begin() + p, op.word);
        for (std::size_t i = 0; i < c.store_.size(); ++i)
            if (c.alive_[i] && c.store_[i].lexical() && c.store_[i].from >= p) {
                ++c.store_[i].from;
                ++c.store_[i].to;
            }
        break;
    case EditOp::Kind::erase:
        c.tokens_.erase(c.tokens_.begin() + p);
        for (std::size_t i = 0; i < c.store_.size(); ++i)
            if (c.alive_[i] && c.store_[i].lexical() && c.store_[i].from > p) {
                --c.store_[i].from;
                --c.store_[i].to;
            }
        break;
    case EditOp::Kind::replace:
        c.tokens_[static_cast<std::size_t>(p)] = op.word;
        break;
    }
    c.reindex();
    c.agenda_.clear();
    if (op.kind != EditOp::Kind::erase) c.add_lexical(p);
    for (std::size_t i = 0; i < c.store_.size(); ++i)
        if (c.alive_[i] && c.store_[i].active(g)) c.agenda_.push_back(c.store_[i].id);
    c.close();
    return c;
}

std::vector<Suggestion> lookahead(const Chart& c, std::size_t k) {
    const Grammar& g = *c.g_;
    const Lexicon& lex = *c.lex_;
    const int n = static_cast<int>(c.tokens_.size());
    std::map<std::string, std::vector<std::string>> found;
    auto add_word = [&](std::vector<std::string>& ws, const std::string& w) {
        if (ws.size() < k && std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    };
    for (const Edge* e : c.edges()) {
        if (e->to != n || !e->active(g)) continue;
        const std::string& x = *e->next(g);
        if (!g.is_lexical(x)) continue;
        const auto& p = g.production(e->prod);
        std::vector<std::uint8_t> want(kFeatCount, 0);
        for (int f = 0; f < kFeatCount; ++f) {
            int cl = p.cls(e->dot + 1, static_cast<Feat>(f));
            if (cl >= 0) want[static_cast<std::size_t>(f)] = e->bind[static_cast<std::size_t>(cl)];
        }
        auto& ws = found[x];
        if (auto pos = pos_from(x)) {
            for (const auto& entry : lex.entries())
                if (entry.pos == *pos && compatible(entry_features(entry), want)) add_word(ws, entry.surface);
            if (*pos == Pos::num) add_word(ws, "<number>");
        } else if (x == "sid") {
            add_word(ws, "<id>");
        } else if (g.is_terminal(x)) {
            add_word(ws, x);
        }
        for (int pid : g.preterminals_of(x))
            if (compatible(lhs_constants(g.production(pid)), want)) add_word(ws, g.production(pid).rhs[0]);
    }
    std::vector<Suggestion> out;
    for (auto& [cat, ws] : found) out.push_back({cat, ws});
    return out;
}

std::vector<Tree> extract_trees(const Chart& c, std::size_t max_trees) {
    const Grammar& g = *c.g_;
    std::map<int, std::vector<Tree>> memo;
    std::function<const std::vector<Tree>&(const Edge&)> derive;

    auto leaf = [&](const Edge& e) {
        Tree t;
        t.category = e.cat;
        t.word = c.tokens_[static_cast<std::size_t>(e.from)];
        t.token = e.from;
        t.edge = e.id;
        t.kind = e.kind;
        if (e.kind == LexKind::entry) t.entry = c.lex_->entries()[static_cast<std::size_t>(e.entry)];
        return t;
    };

    derive = [&](const Edge& e) -> const std::vector<Tree>& {
        auto it = memo.find(e.id);
        if (it != memo.end()) return it->second;
        std::vector<Tree> result;
        if (e.lexical()) {
            result.push_back(leaf(e));
            return memo[e.id] = std::move(result);
        }
        const auto& p = g.production(e.prod);
        const int m = static_cast<int>(p.rhs.size());
        // children chosen left to right; each step extends all partial sequences
        std::function<void(int, int, std::vector<Tree>&)> rec = [&](int k, int vertex, std::vector<Tree>& kids) {
            if (result.size() >= max_trees) return;
            if (k == m) {
                if (vertex != e.to) return;
                Tree t;
                t.category = e.cat;
                t.edge = e.id;
                t.children = kids;
                result.push_back(std::move(t));
                return;
            }
            auto key = std::make_pair(vertex, p.rhs[static_cast<std::size_t>(k)]);
            auto found = c.inactive_at_.find(key);
            if (found == c.inactive_at_.end()) return;
            std::vector<int> ids = found->second;
            std::sort(ids.begin(), ids.end());
            for (int id : ids) {
                if (!c.alive_[static_cast<std::size_t>(id - 1)]) continue;
                const Edge& child = c.store_[static_cast<std::size_t>(id - 1)];
                if (child.to > e.to || (k + 1 == m && child.to != e.to)) continue;
                if (child.kind == LexKind::phrasal && child.active(g)) continue;
                auto vals = c.exported(child);
                bool ok = true;
                for (int f = 0; f < kFeatCount && ok; ++f) {
                    int cl = p.cls(k + 1, static_cast<Feat>(f));
                    auto v = vals[static_cast<std::size_t>(f)];
                    if (cl >= 0 && v != 0 && e.bind[static_cast<std::size_t>(cl)] != v) ok = false;
                }
                if (!ok) continue;
                for (const auto& sub : derive(child)) {
                    kids.push_back(sub);
                    rec(k + 1, child.to, kids);
                    kids.pop_back();
                    if (result.size() >= max_trees) return;
                }
            }
        };
        std::vector<Tree> kids;
        rec(0, e.from, kids);
        return memo[e.id] = std::move(result);
    };

    std::vector<Tree> out;
    for (const Edge* s : c.spanning()) {
        for (const auto& t : derive(*s)) {
            if (out.size() >= max_trees) return out;
            out.push_back(t);
        }
    }
    return out;
}

} // namespace cnl
