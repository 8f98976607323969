#pragma once

#include "cnlkit/lexicon.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cnl {

enum class Feat : std::uint8_t { number, gender, degree };
constexpr int kFeatCount = 3;

const char* feat_name(Feat f);
// Value codes are 1-based within each feature; 0 means unbound.
std::uint8_t feat_code(Feat f, std::string_view value);
std::string feat_value_name(Feat f, std::uint8_t code);

struct Slot {
    int position = 0;  // 0 = lhs, k = k-th rhs symbol
    Feat feat = Feat::number;
};

struct Equation {
    Slot left;
    std::optional<Slot> right;
    std::uint8_t value = 0;  // used when right is empty
};

struct Production {
    int id = 0;
    std::string lhs;
    std::vector<std::string> rhs;
    std::vector<Equation> equations;
    // compiled feature classes: class of each (position, feat), -1 if free
    std::vector<std::array<int, kFeatCount>> slot_class;
    std::vector<Feat> class_feat;
    std::vector<std::uint8_t> class_const;
    int line = 0;

    int cls(int position, Feat f) const { return slot_class[position][static_cast<int>(f)]; }
    bool preterminal = false;
};

class Grammar {
public:
    const std::string& start() const { return start_; }
    const std::vector<Production>& productions() const { return productions_; }
    const Production& production(int id) const { return productions_[static_cast<std::size_t>(id)]; }

    bool is_nonterminal(const std::string& s) const { return lhs_set_.count(s) > 0; }
    bool is_pos_category(const std::string& s) const;
    bool is_terminal(const std::string& s) const { return terminals_.count(s) > 0; }
    // Categories an input token can realise directly.
    bool is_lexical(const std::string& s) const;
    const std::vector<int>& phrasal_of(const std::string& lhs) const;
    const std::vector<int>& preterminals_for(const std::string& word) const;
    const std::vector<int>& preterminals_of(const std::string& lhs) const;
    const std::set<std::string>& terminals() const { return terminals_; }

private:
    friend Grammar compile_grammar(std::string_view source);
    std::string start_;
    std::vector<Production> productions_;
    std::set<std::string> lhs_set_;
    std::set<std::string> terminals_;
    std::map<std::string, std::vector<int>> phrasal_;
    std::map<std::string, std::vector<int>> pre_by_word_;
    std::map<std::string, std::vector<int>> pre_by_lhs_;
};

Grammar compile_grammar(std::string_view source);
Grammar load_grammar_file(const std::string& path);

enum class LexKind : std::int8_t { phrasal, entry, preterminal, terminal, number, sid };

struct Edge {
    int id = 0;
    int from = 0;
    int to = 0;
    int prod = -1;      // production id for phrasal/preterminal edges
    int dot = 0;
    LexKind kind = LexKind::phrasal;
    std::string cat;    // lhs category
    int entry = -1;     // lexicon entry index for LexKind::entry
    std::vector<std::uint8_t> bind;
    std::vector<int> deps;

    bool lexical() const { return kind != LexKind::phrasal; }
    bool active(const Grammar& g) const;
    const std::string* next(const Grammar& g) const;
    // Identity without id and deps.
    std::string identity() const;
};

struct EditOp {
    enum class Kind { insert, erase, replace };
    Kind kind = Kind::insert;
    int position = 0;
    std::string word;
};

struct Suggestion {
    std::string category;
    std::vector<std::string> words;
};

struct Tree {
    std::string category;
    std::string word;      // leaves only
    int token = -1;        // leaves only
    int edge = -1;
    LexKind kind = LexKind::phrasal;
    std::optional<LexEntry> entry;
    std::vector<Tree> children;

    bool leaf() const { return token >= 0; }
    std::string str() const;
};

class Chart {
public:
    const std::vector<std::string>& tokens() const { return tokens_; }
    std::size_t vertex_count() const { return tokens_.size() + 1; }
    // Live edges in id order.
    std::vector<const Edge*> edges() const;
    std::set<std::string> identity_set() const;
    std::vector<const Edge*> spanning() const;
    std::string dump() const;
    std::size_t agenda_size() const { return agenda_.size(); }
    const Grammar& grammar() const { return *g_; }
    const Lexicon& lexicon() const { return *lex_; }

private:
    friend Chart parse(const Grammar&, const Lexicon&, std::vector<std::string>);
    friend Chart apply_edit(Chart, const EditOp&, const Grammar&, const Lexicon&);
    friend std::vector<Suggestion> lookahead(const Chart&, std::size_t);
    friend std::vector<Tree> extract_trees(const Chart&, std::size_t);

    void add_lexical(int position);
    int add_edge(Edge e);
    void close();
    void process_active(int id);
    void process_inactive(int id);
    void combine(const Edge& active, const Edge& inactive);
    void predict(const Edge& active);
    std::vector<std::uint8_t> exported(const Edge& e) const;
    void reindex();

    const Grammar* g_ = nullptr;
    const Lexicon* lex_ = nullptr;
    std::vector<std::string> tokens_;
    std::vector<Edge> store_;     // indexed by id - 1
    std::vector<bool> alive_;
    std::set<std::string> seen_;
    std::vector<int> agenda_;
    std::map<std::pair<int, std::string>, std::vector<int>> active_at_;    // (to, next symbol)
    std::map<std::pair<int, std::string>, std::vector<int>> inactive_at_;  // (from, category)
};

Chart parse(const Grammar& g, const Lexicon& lex, std::vector<std::string> tokens);
std::vector<Suggestion> lookahead(const Chart& c, std::size_t k = 8);
bool sentence_complete(const Chart& c);
Chart apply_edit(Chart c, const EditOp& e, const Grammar& g, const Lexicon& lex);
std::vector<Tree> extract_trees(const Chart& c, std::size_t max_trees = 64);

bool is_number_token(std::string_view tok);
bool is_sid_token(std::string_view tok);

} // namespace cnl
