#include "cnlkit/asp.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <climits>

namespace cnl::asp {

namespace {

// A rule instance that can put `head` into a model; choice rules contribute
// one per template atom, usable only when that atom is guessed true.
struct Support {
    int head;
    const std::vector<int>* pos;
    const std::vector<int>* neg;
    bool choice;
};

enum : signed char { kUnset = -1, kFalse = 0, kTrue = 1 };

class Search {
public:
    Search(const GroundProgram& g, std::size_t limit) : g_(g), limit_(limit), n_(static_cast<std::size_t>(g.atoms.size())) {
        watch_.resize(n_);
        in_guess_.assign(n_, 0);
        auto guess = [&](int a) {
            if (!in_guess_[static_cast<std::size_t>(a)]) {
                in_guess_[static_cast<std::size_t>(a)] = 1;
                guess_.push_back(a);
            }
        };
        for (const auto& r : g.rules) {
            if (r.kind == GroundRule::Kind::choice)
                for (int h : r.choice_heads) guess(h);
        }
        for (const auto& r : g.rules)
            for (int b : r.neg) guess(b);
        for (const auto& r : g.rules) {
            if (r.kind == GroundRule::Kind::normal) add_support({r.head, &r.pos, &r.neg, false});
            if (r.kind == GroundRule::Kind::choice)
                for (int h : r.choice_heads) add_support({h, &r.pos, &r.neg, true});
        }
    }

    std::vector<AnswerSet> run() {
        std::vector<signed char> assign(n_, kUnset);
        descend(assign);
        return std::move(models_);
    }

private:
    void add_support(Support s) {
        std::size_t idx = supports_.size();
        supports_.push_back(s);
        for (int a : *s.pos) watch_[static_cast<std::size_t>(a)].push_back(idx);
    }

    // Least model of the program with `not` literals and choice atoms decided
    // pessimistically (lower) or optimistically (upper) by the assignment.
    std::vector<char> fixpoint(const std::vector<signed char>& assign, bool upper) const {
        std::vector<char> in(n_, 0);
        std::vector<int> count(supports_.size());
        std::vector<int> queue;
        auto fire = [&](int h) {
            if (!in[static_cast<std::size_t>(h)]) {
                in[static_cast<std::size_t>(h)] = 1;
                queue.push_back(h);
            }
        };
        for (std::size_t i = 0; i < supports_.size(); ++i) {
            const Support& s = supports_[i];
            bool on = true;
            for (int b : *s.neg) {
                auto v = assign[static_cast<std::size_t>(b)];
                if (upper ? v == kTrue : v != kFalse) {
                    on = false;
                    break;
                }
            }
            if (on && s.choice) {
                auto v = assign[static_cast<std::size_t>(s.head)];
                on = upper ? v != kFalse : v == kTrue;
            }
            count[i] = on ? static_cast<int>(s.pos->size()) : INT_MAX;
            if (count[i] == 0) fire(s.head);
        }
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            for (std::size_t i : watch_[static_cast<std::size_t>(a)])
                if (count[i] != INT_MAX && --count[i] == 0) fire(supports_[i].head);
        }
        return in;
    }

    // Returns false on conflict; forces what the bounds imply until stable.
    bool propagate(std::vector<signed char>& assign, std::vector<char>& lower) const {
        while (true) {
            auto upper = fixpoint(assign, true);
            lower = fixpoint(assign, false);
            bool changed = false;
            auto force = [&](int a, signed char v) {
                auto& cur = assign[static_cast<std::size_t>(a)];
                if (cur == kUnset) {
                    cur = v;
                    changed = true;
                    return true;
                }
                return cur == v;
            };
            for (int a : guess_) {
                auto i = static_cast<std::size_t>(a);
                if (assign[i] == kTrue && !upper[i]) return false;
                if (assign[i] == kFalse && lower[i]) return false;
                if (assign[i] == kUnset) {
                    if (lower[i]) force(a, kTrue);
                    else if (!upper[i]) force(a, kFalse);
                }
            }
            for (const auto& r : g_.rules) {
                if (r.kind == GroundRule::Kind::normal) continue;
                // classify body literals: satisfied / open / violated
                int open = 0;
                int open_atom = -1;
                bool open_is_neg = false;
                bool dead = false;
                for (int a : r.pos) {
                    auto i = static_cast<std::size_t>(a);
                    if (lower[i]) continue;
                    if (!upper[i]) {
                        dead = true;
                        break;
                    }
                    ++open;
                    open_atom = a;
                    open_is_neg = false;
                }
                if (dead) continue;
                for (int a : r.neg) {
                    auto i = static_cast<std::size_t>(a);
                    if (!upper[i]) continue;
                    if (lower[i]) {
                        dead = true;
                        break;
                    }
                    ++open;
                    open_atom = a;
                    open_is_neg = true;
                }
                if (dead) continue;
                if (r.kind == GroundRule::Kind::constraint) {
                    if (open == 0) return false;
                    if (open == 1 && assign[static_cast<std::size_t>(open_atom)] == kUnset &&
                        in_guess_[static_cast<std::size_t>(open_atom)]) {
                        if (!force(open_atom, open_is_neg ? kTrue : kFalse)) return false;
                    }
                    continue;
                }
                if (open != 0) continue;
                // body holds in every completion, so guessed-true heads are in
                auto known = [&](int h) {
                    return lower[static_cast<std::size_t>(h)] || assign[static_cast<std::size_t>(h)] == kTrue;
                };
                int sure = 0, possible = 0;
                for (int h : r.choice_heads) {
                    sure += known(h) ? 1 : 0;
                    possible += upper[static_cast<std::size_t>(h)] ? 1 : 0;
                }
                if (r.upper >= 0 && sure > r.upper) return false;
                if (possible < r.lower) return false;
                if (r.upper >= 0 && sure == r.upper)
                    for (int h : r.choice_heads)
                        if (!known(h) && !force(h, kFalse)) return false;
                if (possible == r.lower)
                    for (int h : r.choice_heads)
                        if (upper[static_cast<std::size_t>(h)] && !force(h, kTrue)) return false;
            }
            if (!changed) return true;
        }
    }

    void descend(std::vector<signed char> assign) {
        if (limit_ && models_.size() >= limit_) return;
        std::vector<char> lower;
        if (!propagate(assign, lower)) return;
        for (int a : guess_) {
            if (assign[static_cast<std::size_t>(a)] != kUnset) continue;
            auto t = assign;
            t[static_cast<std::size_t>(a)] = kTrue;
            descend(std::move(t));
            assign[static_cast<std::size_t>(a)] = kFalse;
            descend(std::move(assign));
            return;
        }
        AnswerSet m;
        for (std::size_t i = 0; i < n_; ++i)
            if (lower[i]) m.insert(static_cast<int>(i));
        models_.push_back(std::move(m));
    }

    const GroundProgram& g_;
    std::size_t limit_;
    std::size_t n_;
    std::vector<int> guess_;
    std::vector<char> in_guess_;
    std::vector<Support> supports_;
    std::vector<std::vector<std::size_t>> watch_;
    std::vector<AnswerSet> models_;
};

bool all_in(const std::vector<int>& v, const std::set<int>& m) {
    return std::all_of(v.begin(), v.end(), [&](int a) { return m.count(a) > 0; });
}
bool none_in(const std::vector<int>& v, const std::set<int>& m) {
    return std::none_of(v.begin(), v.end(), [&](int a) { return m.count(a) > 0; });
}

} // namespace

std::vector<AnswerSet> stable_models(const GroundProgram& g, std::size_t limit) { return Search(g, limit).run(); }

std::vector<PositiveRule> reduct(const GroundProgram& g, const std::set<int>& m) {
    std::vector<PositiveRule> out;
    for (const auto& r : g.rules) {
        if (!none_in(r.neg, m)) continue;
        switch (r.kind) {
        case GroundRule::Kind::normal: out.push_back({r.head, r.pos}); break;
        case GroundRule::Kind::constraint: out.push_back({-1, r.pos}); break;
        case GroundRule::Kind::choice:
            for (int h : r.choice_heads)
                if (m.count(h)) out.push_back({h, r.pos});
            break;
        }
    }
    return out;
}

// Naive iteration on purpose: shares no code with the search's propagation.
std::set<int> least_model(const std::vector<PositiveRule>& rules) {
    std::set<int> m;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : rules)
            if (r.head >= 0 && !m.count(r.head) && all_in(r.body, m)) {
                m.insert(r.head);
                changed = true;
            }
    }
    return m;
}

bool verify_answer_set(const GroundProgram& g, const std::set<int>& m) {
    if (least_model(reduct(g, m)) != m) return false;
    for (const auto& r : g.rules) {
        bool body = all_in(r.pos, m) && none_in(r.neg, m);
        if (!body) continue;
        if (r.kind == GroundRule::Kind::constraint) return false;
        if (r.kind == GroundRule::Kind::choice) {
            auto n = std::count_if(r.choice_heads.begin(), r.choice_heads.end(), [&](int h) { return m.count(h) > 0; });
            if (n < r.lower || (r.upper >= 0 && n > r.upper)) return false;
        }
    }
    for (int a : m) {
        const Term& t = g.atoms.at(a);
        if (t.is_strong_neg())
            if (auto p = g.atoms.find(t.atom()); p && m.count(*p)) return false;
    }
    return true;
}

const char* answer_name(Answer a) {
    switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
    case Answer::no_models: return "no models";
    }
    return "?";
}

Answer asp_query(const GroundProgram& g, const std::vector<AnswerSet>& models, const std::vector<Term>& conjuncts) {
    if (models.empty()) return Answer::no_models;
    auto entailed = [&](const Term& lit) {
        auto id = g.atoms.find(lit);
        if (!id) return false;
        return std::all_of(models.begin(), models.end(), [&](const AnswerSet& m) { return m.count(*id) > 0; });
    };
    bool all = true;
    for (const auto& c : conjuncts) {
        if (entailed(Term::negate(c))) return Answer::no;
        if (!entailed(c)) all = false;
    }
    return all ? Answer::yes : Answer::unknown;
}

std::vector<Term> render(const GroundProgram& g, const AnswerSet& m, bool project) {
    std::vector<Term> out;
    for (int a : m) {
        const Term& t = g.atoms.at(a);
        if (project) {
            if (!g.shows.empty()) {
                if (std::find(g.shows.begin(), g.shows.end(), t.pred_key()) == g.shows.end()) continue;
            } else if (g.hide) {
                continue;
            }
        }
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string render_line(const GroundProgram& g, const AnswerSet& m, bool project) {
    std::string s;
    for (const auto& t : render(g, m, project)) {
        if (!s.empty()) s += ' ';
        s += t.str();
    }
    return s;
}

} // namespace cnl::asp
