#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cnl {

enum class Pos { noun, pnoun, verb, adj, adv, adv_comp, adv_sup, prep, det, num };
enum class Gender { m, f, n };
enum class Number { sg, pl };
enum class Degree { pos, comp, sup };

const char* pos_name(Pos p);
std::optional<Pos> pos_from(std::string_view s);
const char* gender_name(Gender g);
const char* number_name(Number n);
const char* degree_name(Degree d);

struct Features {
    std::optional<Gender> gender;
    std::optional<Number> number;
    std::optional<Degree> degree;
    friend bool operator==(const Features&, const Features&) = default;
};

struct LexEntry {
    std::string surface;
    Pos pos = Pos::noun;
    std::string symbol;
    Features features;
    std::string synclass;
    friend bool operator==(const LexEntry&, const LexEntry&) = default;
};

class Lexicon {
public:
    // Entries for `surface` after lowercasing; throws Errc::illegal_word.
    std::vector<LexEntry> lookup(std::string_view surface) const;
    // Same as lookup but returns indices into entries().
    std::vector<std::size_t> lookup_ids(std::string_view surface) const;
    bool same_concept(std::string_view a, std::string_view b) const;
    std::string synclass_of(std::string_view symbol) const;

    void add_entry(LexEntry e);
    void add_illegal(std::string word);
    void add_synonym(std::string a, std::string b);

    const std::vector<LexEntry>& entries() const { return entries_; }
    const std::set<std::string>& illegal() const { return illegal_; }
    bool is_illegal(std::string_view w) const;
    // Longest multi-word surface, in words; used by the tokenizer.
    int max_surface_words() const { return max_words_; }
    bool has_surface(std::string_view s) const;
    std::size_t synonym_class_count() const;

    std::string serialize() const;
    const std::vector<std::string>& warnings() const { return warnings_; }
    void warn(std::string w) { warnings_.push_back(std::move(w)); }

    friend bool operator==(const Lexicon& a, const Lexicon& b);

private:
    std::string find_root(const std::string& s) const;
    void refresh_classes();

    std::vector<LexEntry> entries_;
    std::multimap<std::string, std::size_t> by_surface_;
    std::set<std::string> illegal_;
    std::map<std::string, std::string> parent_;
    std::vector<std::pair<std::string, std::string>> syn_pairs_;
    std::vector<std::string> warnings_;
    int max_words_ = 1;
};

std::string lowercase(std::string_view s);

// Parses the predicate-style lexicon format. Throws Errc::parse / Errc::validation.
Lexicon load_lexicon(std::string_view source);
Lexicon load_lexicon_file(const std::string& path);

} // namespace cnl
