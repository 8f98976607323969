#pragma once

#include "cnlkit/chart.hpp"
#include "cnlkit/lexicon.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cnl {

struct Referent {
    enum class Sort { object, event };
    std::string label;        // A, B, ..., Z, A1, ...
    std::string sid;          // sentence id
    int sentence = 0;         // 1-based ordinal in the document
    int token = 0;            // 1-based token index of the introducing word
    int paragraph = 1;
    Sort sort = Sort::object;
    std::optional<Gender> gender;
    std::optional<Number> number;
    std::string noun;         // logical symbol of the introducing noun
    std::string name;         // proper-name constant, empty otherwise
    std::string quant;        // a, some, all, every, bare, leq1, ...
};

struct Drs;

struct Condition {
    enum class Op { simple, neg, disj, impl, dflt };
    Op op = Op::simple;
    // simple
    std::string pred;
    std::vector<std::string> args;
    std::string index;        // "sentence/token"
    // complex: impl/dflt = {antecedent, consequent}; neg = {body}; disj = alternatives
    std::vector<Drs> boxes;
    bool exclusive = false;   // disj from "either ... or"
    int sentence = 0;
};

struct Drs {
    std::vector<std::string> universe;
    std::vector<Condition> conditions;
};

const char* op_name(Condition::Op op);

// One root DRS for a whole document plus the referent table.
struct Discourse {
    Drs root;
    std::vector<Referent> referents;
    std::vector<std::string> history;  // root-visible labels, least recently mentioned first
    const Referent* find(const std::string& label) const;
};

struct SentenceRecord {
    enum class Mode { defeasible, strict, conflict_constraint };
    enum class ExceptionKind { except_prev, exception_to };
    struct Exception {
        ExceptionKind kind = ExceptionKind::except_prev;
        std::vector<std::string> targets;
    };

    std::string id;
    bool explicit_id = false;
    Mode mode = Mode::defeasible;
    std::optional<Exception> exception;
    std::vector<std::string> cancel_targets;
    std::string text;                 // body text without id/annotation
    std::vector<std::string> tokens;
    int ordinal = 0;                  // 1-based
    int paragraph = 1;
    bool question = false;
    std::string form;                 // decl, cond, default, cancel, limit
    std::size_t cond_begin = 0, cond_end = 0;  // fragment: root conditions added
};

const char* mode_name(SentenceRecord::Mode m);

struct RawSentence {
    std::string id;               // explicit id or empty
    std::vector<std::string> annotation;  // tokens inside leading parentheses
    std::string body;
    int paragraph = 1;
    bool question = false;
};

// Sentences end at '.' or '?' followed by whitespace or end of text; a blank
// line starts a new paragraph. Leading `9.m`-style ids and `(...)` annotations
// are split off.
std::vector<RawSentence> split_document(std::string_view text);
// Splits punctuation, expands "'s" to "is", joins multi-word lexicon surfaces.
std::vector<std::string> tokenize(std::string_view body, const Lexicon& lex);
// Assigns ids (pN.sM when absent), modes, exception and cancel targets.
std::vector<SentenceRecord> annotate(const std::vector<RawSentence>& sentences, const Lexicon& lex);

// Interrogative sentence as a stand-alone box over a copy of the discourse.
struct QuestionDrs {
    Drs box;
    Discourse discourse;
};

class DrsBuilder {
public:
    explicit DrsBuilder(const Lexicon& lex) : lex_(&lex) {}
    // Continues an existing discourse.
    DrsBuilder(const Lexicon& lex, Discourse d)
        : lex_(&lex), d_(std::move(d)), next_label_(static_cast<int>(d_.referents.size())) {}

    // Extends the root DRS with one parsed sentence; fills rec.form and the fragment.
    void build(const Tree& tree, SentenceRecord& rec);
    // Does not touch this builder's discourse.
    QuestionDrs question(const Tree& tree, int ordinal) const;
    const Discourse& discourse() const { return d_; }

    // Reference resolution over `scope` (labels in introduction order);
    // the defaults use the referents accessible from the root.
    const Referent& resolve_pronoun(std::optional<Gender> g, Number n, const std::string& np,
                                    const std::vector<std::string>* scope = nullptr) const;
    const Referent& resolve_definite(const std::string& noun, const std::string& np,
                                     const std::vector<std::string>* scope = nullptr) const;
    const Referent& resolve_ordinal(const std::string& noun, int k, int paragraph, const std::string& np,
                                    const std::vector<std::string>* scope = nullptr) const;

private:
    struct Ctx;
    std::string fresh(Referent r, Drs& box, Ctx& c);
    std::string np(const Tree& t, Drs& box, Ctx& c);
    void vp(const Tree& t, const std::string& subj, Drs& box, Ctx& c);
    void v1(const Tree& t, const std::string& subj, Drs& box, Ctx& c);
    void predication(const Tree& t, std::size_t verb_at, const std::string& subj, Drs& box, Ctx& c);
    void copula(const Tree& pred, int cop_token, const std::string& subj, Drs& box, Ctx& c);
    std::string introduce(const Tree& n, const std::string& quant, Drs& box, Ctx& c);
    void simple(Drs& box, const Ctx& c, std::string pred, std::vector<std::string> args, int token);
    void restore(Ctx& c, const std::vector<std::string>& before) const;
    void mention(Ctx& c, const std::string& label) const;

    const Lexicon* lex_;
    Discourse d_;
    int next_label_ = 0;
};

// Every argument of a simple condition that looks like a referent label is
// declared in its own box or an enclosing one; throws Errc::scope otherwise.
void check_scope(const Discourse& d);

struct Document {
    std::vector<SentenceRecord> records;
    Discourse discourse;
};

// Splits, tokenizes, parses (first tree with the fewest nodes) and builds.
// Parse failures raise Errc::parse naming the sentence id and the lookahead
// at the failing position.
Document process_document(std::string_view text, const Lexicon& lex, const Grammar& g);
// Parses one question against a finished document; the document is not changed.
QuestionDrs process_question(const Document& doc, std::string_view text, const Lexicon& lex, const Grammar& g);
// Picks the preferred tree for a token sequence; throws with suggestions.
Tree parse_sentence(const std::vector<std::string>& tokens, const Lexicon& lex, const Grammar& g,
                    const std::string& sid);

std::string print_drs(const Drs& d, int indent = 0);
std::string print_discourse(const Discourse& d);

} // namespace cnl
