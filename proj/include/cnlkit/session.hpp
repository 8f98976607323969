#pragma once

#include "cnlkit/drs.hpp"
#include "cnlkit/lpda.hpp"
#include "cnlkit/translator.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cnl {

// Loaded once, shared read-only by every session.
struct Resources {
    std::string lexicon_path, grammar_path, scales_path;
    Lexicon lexicon;
    Grammar grammar;
    ScaleTable scales;

    static std::shared_ptr<const Resources> load(std::string lexicon_path, std::string grammar_path,
                                                 std::string scales_path);
    // Shipped files under the data directory.
    static std::shared_ptr<const Resources> load_default();
};

// Derived artifacts of one document version. Never mutated after construction.
struct Snapshot {
    Document document;
    Translation translation;
    lpda::Engine engine;

    Snapshot(Document d, Translation t);
};

struct Answer {
    std::string goal;        // printed goal
    bool question = false;   // asked in CNL rather than literal syntax
    lpda::QueryResult result;
};

// Query text ending in '?' is a CNL question; anything else is a goal in
// literal syntax, e.g. `discount(John,lobster,?A)`.
Answer ask(const Snapshot& s, const Resources& r, std::string_view query);
std::string render_answer(const Answer& a);

class Session {
public:
    explicit Session(std::shared_ptr<const Resources> res);

    // Replaces the document; on error the old one stays.
    void load(std::string_view text);
    // Appends one sentence; `annotation` is the text that would go inside the
    // leading parentheses ("except", "strict", "exception to 9.l", ...).
    // Returns the committed record and the DRS fragment it added.
    std::pair<SentenceRecord, std::string> add(std::string_view text, std::string_view annotation);
    void clear();

    bool empty() const { return lines_.empty(); }
    const std::vector<std::string>& lines() const { return lines_; }
    std::string text() const;
    // Built on first use after each change.
    std::shared_ptr<const Snapshot> current();
    // Same, but throws Errc::no_knowledge_base when there is no sentence.
    std::shared_ptr<const Snapshot> snapshot();
    const Resources& resources() const { return *res_; }

    // Single JSON document: {"sentences": [...], "issued": [...]}.
    std::string save() const;
    void restore(std::string_view json);

private:
    std::shared_ptr<const Resources> res_;
    std::vector<std::string> lines_;  // one sentence per line, ids explicit
    std::set<std::string> issued_;
    std::shared_ptr<const Snapshot> cache_;
};

// Root conditions and referents one sentence contributed.
Drs fragment(const Document& d, const SentenceRecord& r);

} // namespace cnl
