#include "cnlkit/drs.hpp"

#include "cnlkit/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace cnl {

namespace {

bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && space(s[a])) ++a;
    while (b > a && space(s[b - 1])) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_words(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

RawSentence dissect(std::string text, int paragraph) {
    RawSentence r;
    r.paragraph = paragraph;
    text = trim(text);
    if (!text.empty() && text.back() == '?') r.question = true;
    if (!text.empty() && (text.back() == '.' || text.back() == '?')) text.pop_back();
    auto first_space = text.find_first_of(" \t\n");
    if (first_space != std::string::npos && is_sid_token(text.substr(0, first_space))) {
        r.id = text.substr(0, first_space);
        text = trim(text.substr(first_space));
    }
    if (!text.empty() && text.front() == '(') {
        auto close = text.find(')');
        if (close == std::string::npos) throw Error(Errc::parse, "unbalanced annotation in \"" + text + "\"");
        std::string inner = text.substr(1, close - 1);
        std::replace(inner.begin(), inner.end(), ',', ' ');
        for (auto& w : split_words(inner)) r.annotation.push_back(lowercase(w));
        text = trim(text.substr(close + 1));
    }
    r.body = text;
    return r;
}

// "; expected one of: cat (w1, w2) ..." for the position after `prefix`.
std::string expected_after(const std::vector<std::string>& prefix, const Lexicon& lex, const Grammar& g) {
    std::string msg = "; expected one of:";
    for (const auto& s : lookahead(parse(g, lex, prefix), 4)) {
        msg += " " + s.category;
        if (!s.words.empty()) {
            msg += " (";
            for (std::size_t i = 0; i < s.words.size(); ++i) msg += (i ? ", " : "") + s.words[i];
            msg += ")";
        }
    }
    return msg;
}

} // namespace

const char* mode_name(SentenceRecord::Mode m) {
    switch (m) {
    case SentenceRecord::Mode::defeasible: return "defeasible";
    case SentenceRecord::Mode::strict: return "strict";
    case SentenceRecord::Mode::conflict_constraint: return "conflict_constraint";
    }
    return "?";
}

std::vector<RawSentence> split_document(std::string_view text) {
    std::vector<RawSentence> out;
    std::string cur;
    int paragraph = 1;
    bool pending_break = false;
    auto flush = [&] {
        if (trim(cur).empty()) {
            cur.clear();
            return;
        }
        out.push_back(dissect(cur, paragraph));
        cur.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '%' && trim(cur).empty()) {  // comment line
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (ch == '\n') {
            // a blank line separates paragraphs
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '\n' && space(text[j])) ++j;
            if (j < text.size() && text[j] == '\n') {
                flush();
                pending_break = !out.empty();
                i = j;
                continue;
            }
        }
        if (pending_break && !space(ch)) {
            ++paragraph;
            pending_break = false;
        }
        cur.push_back(ch);
        if ((ch == '.' || ch == '?') && (i + 1 == text.size() || space(text[i + 1]))) flush();
    }
    flush();
    return out;
}

std::vector<std::string> tokenize(std::string_view body, const Lexicon& lex) {
    std::vector<std::string> raw;
    for (auto w : split_words(body)) {
        std::vector<std::string> tail;
        while (!w.empty() && (w.back() == ',' || w.back() == ';' || w.back() == ':')) {
            tail.insert(tail.begin(), std::string(1, w.back()));
            w.pop_back();
        }
        while (!w.empty() && (w.front() == '(' || w.front() == '"')) w.erase(w.begin());
        while (!w.empty() && (w.back() == ')' || w.back() == '"')) w.pop_back();
        if (w.size() > 2 && (w.ends_with("'s") || w.ends_with("’s"))) {
            raw.push_back(w.substr(0, w.size() - 2));
            raw.emplace_back("is");
        } else if (!w.empty()) {
            raw.push_back(w);
        }
        for (auto& t : tail) raw.push_back(t);
    }
    std::vector<std::string> out;
    const int span = lex.max_surface_words();
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t take = 1;
        for (int n = std::min<int>(span, static_cast<int>(raw.size() - i)); n >= 2; --n) {
            std::string joined = raw[i];
            for (int k = 1; k < n; ++k) joined += " " + raw[i + static_cast<std::size_t>(k)];
            if (lex.has_surface(joined)) {
                take = static_cast<std::size_t>(n);
                out.push_back(joined);
                break;
            }
        }
        if (take == 1) out.push_back(raw[i]);
        i += take;
    }
    return out;
}

std::vector<SentenceRecord> annotate(const std::vector<RawSentence>& sentences, const Lexicon& lex) {
    std::vector<SentenceRecord> out;
    std::set<std::string> seen;
    int para = 0, in_para = 0;
    for (const auto& s : sentences) {
        SentenceRecord r;
        if (s.paragraph != para) {
            para = s.paragraph;
            in_para = 0;
        }
        ++in_para;
        r.ordinal = static_cast<int>(out.size()) + 1;
        r.paragraph = s.paragraph;
        r.question = s.question;
        r.explicit_id = !s.id.empty();
        r.id = r.explicit_id ? s.id : "p" + std::to_string(para) + ".s" + std::to_string(in_para);
        if (!seen.insert(r.id).second) throw Error(Errc::validation, "duplicate sentence id " + r.id);
        r.text = s.body;
        r.tokens = tokenize(s.body, lex);

        const auto& a = s.annotation;
        auto fail = [&](Errc code, const std::string& what) { throw Error(code, "sentence " + r.id + ": " + what); };
        if (a.empty()) {
        } else if (a == std::vector<std::string>{"strict"}) {
            r.mode = SentenceRecord::Mode::strict;
        } else if (a == std::vector<std::string>{"conflict", "constraint"}) {
            r.mode = SentenceRecord::Mode::conflict_constraint;
        } else if (a == std::vector<std::string>{"except"}) {
            // nearest preceding sentence that carries no annotation itself
            auto it = std::find_if(out.rbegin(), out.rend(), [](const SentenceRecord& p) {
                return p.mode == SentenceRecord::Mode::defeasible && !p.exception && !p.question;
            });
            if (it == out.rend()) fail(Errc::dangling_target, "(except) has no preceding sentence");
            r.exception = SentenceRecord::Exception{SentenceRecord::ExceptionKind::except_prev, {it->id}};
        } else if (a.size() >= 3 && a[0] == "exception" && a[1] == "to") {
            SentenceRecord::Exception e{SentenceRecord::ExceptionKind::exception_to, {}};
            for (std::size_t k = 2; k < a.size(); ++k) {
                if (!seen.count(a[k]) || a[k] == r.id) fail(Errc::dangling_target, "exception target " + a[k] + " is not an earlier sentence");
                e.targets.push_back(a[k]);
            }
            r.exception = std::move(e);
        } else {
            std::string joined;
            for (const auto& w : a) joined += (joined.empty() ? "" : " ") + w;
            fail(Errc::parse, "unknown annotation (" + joined + ")");
        }

        auto cancel = std::find_if(r.tokens.begin(), r.tokens.end(),
                                   [](const std::string& t) { return lowercase(t) == "cancel"; });
        if (!r.tokens.empty() && lowercase(r.tokens[0]) == "if" && cancel != r.tokens.end()) {
            for (auto it = cancel + 1; it != r.tokens.end(); ++it) {
                if (!is_sid_token(*it)) continue;
                if (!seen.count(*it) || *it == r.id) fail(Errc::dangling_target, "cancel target " + *it + " is not an earlier sentence");
                r.cancel_targets.push_back(*it);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

Tree parse_sentence(const std::vector<std::string>& tokens, const Lexicon& lex, const Grammar& g,
                    const std::string& sid) {
    Chart chart = parse(g, lex, tokens);
    auto trees = extract_trees(chart);
    if (trees.empty()) {
        // longest prefix that still parses tells where the sentence went wrong
        std::size_t good = 0;
        for (std::size_t k = tokens.size(); k > 0; --k) {
            std::vector<std::string> prefix(tokens.begin(), tokens.begin() + static_cast<long>(k - 1));
            auto c = parse(g, lex, prefix);
            auto sugg = lookahead(c, 64);
            bool next_ok = false;
            for (const auto& s : sugg)
                for (const auto& w : s.words)
                    if (lowercase(w) == lowercase(tokens[k - 1])) next_ok = true;
            if (!next_ok) continue;
            good = k;
            break;
        }
        std::string msg = "sentence " + sid + ": cannot parse";
        if (good < tokens.size()) msg += " at '" + tokens[good] + "' (token " + std::to_string(good + 1) + ")";
        else msg += ": sentence is incomplete";
        msg += expected_after(std::vector<std::string>(tokens.begin(), tokens.begin() + static_cast<long>(good)), lex, g);
        throw Error(Errc::parse, msg);
    }
    auto size = [](const Tree& t) {
        std::function<int(const Tree&)> rec = [&](const Tree& x) {
            int n = 1;
            for (const auto& k : x.children) n += rec(k);
            return n;
        };
        return rec(t);
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < trees.size(); ++i)
        if (size(trees[i]) < size(trees[best])) best = i;
    return trees[best];
}

Document process_document(std::string_view text, const Lexicon& lex, const Grammar& g) {
    Document doc;
    doc.records = annotate(split_document(text), lex);
    DrsBuilder b(lex);
    for (auto& r : doc.records) {
        if (r.question) throw Error(Errc::unsupported, "sentence " + r.id + ": questions are asked, not asserted");
        Tree t;
        try {
            t = parse_sentence(r.tokens, lex, g, r.id);
        } catch (const Error& e) {
            if (e.code() == Errc::unknown_word || e.code() == Errc::illegal_word) {
                std::string msg = "sentence " + r.id + ": " + e.what();
                // suggestions for the slot the bad word occupies
                std::size_t k = 0;
                while (k < r.tokens.size()) {
                    const auto& tok = r.tokens[k];
                    bool known = is_number_token(tok) || is_sid_token(tok) || g.is_terminal(lowercase(tok));
                    try {
                        known = known || !lex.lookup_ids(tok).empty();
                    } catch (const Error&) {
                        known = false;
                    }
                    if (!known) break;
                    ++k;
                }
                try {
                    msg += expected_after(std::vector<std::string>(r.tokens.begin(), r.tokens.begin() + static_cast<long>(k)), lex, g);
                } catch (const Error&) {
                }
                throw Error(e.code(), msg);
            }
            throw;
        }
        b.build(t, r);
    }
    doc.discourse = b.discourse();
    return doc;
}

QuestionDrs process_question(const Document& doc, std::string_view text, const Lexicon& lex, const Grammar& g) {
    auto raw = split_document(text);
    if (raw.size() != 1 || !raw[0].question)
        throw Error(Errc::parse, "expected exactly one question ending in '?'");
    auto tokens = tokenize(raw[0].body, lex);
    Tree t = parse_sentence(tokens, lex, g, "?");
    DrsBuilder b(lex, doc.discourse);
    return b.question(t, static_cast<int>(doc.records.size()) + 1);
}

} // namespace cnl
