#pragma once

#include "cnlkit/term.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cnl::asp {

// `atom` may be strongly negated ("-"(A)).
struct Literal {
    Term atom;
    bool naf = false;
};

struct Builtin {
    std::string op;
    Term lhs, rhs;
};

using BodyItem = std::variant<Literal, Builtin>;

struct ChoiceElement {
    Term atom;
    std::vector<BodyItem> condition;
};

struct Rule {
    enum class Kind { fact, normal, constraint, choice };
    Kind kind = Kind::normal;
    std::vector<Term> head;  // disjunction; empty for constraints
    std::optional<Term> lower, upper;
    std::vector<ChoiceElement> elements;
    std::vector<BodyItem> body;
    int line = 0;
};

struct Program {
    std::vector<Rule> rules;
    std::vector<std::string> shows;  // "name/arity"
    bool hide = false;
};

// Throws Errc::parse with line and column.
Program parse_asp(std::string_view text);

struct GroundRule {
    enum class Kind { normal, constraint, choice };
    Kind kind = Kind::normal;
    int head = -1;
    std::vector<int> choice_heads;
    int lower = 0;
    int upper = -1;  // -1: unbounded
    std::vector<int> pos, neg;
};

struct GroundProgram {
    AtomStore atoms;
    std::vector<GroundRule> rules;
    std::vector<std::string> shows;
    bool hide = false;
};

GroundProgram ground(const Program& p);

struct PositiveRule {
    int head = -1;  // -1 for constraints
    std::vector<int> body;
};

// Drops rules blocked by M and deletes the remaining `not` literals. Choice
// rules contribute `a :- body+` for each selected head a in M.
std::vector<PositiveRule> reduct(const GroundProgram& g, const std::set<int>& m);
std::set<int> least_model(const std::vector<PositiveRule>& rules);
// Independent stable-model check, separate from the search.
bool verify_answer_set(const GroundProgram& g, const std::set<int>& m);

using AnswerSet = std::set<int>;

std::vector<AnswerSet> stable_models(const GroundProgram& g, std::size_t limit = 0);

enum class Answer { yes, no, unknown, no_models };
const char* answer_name(Answer a);

Answer asp_query(const GroundProgram& g, const std::vector<AnswerSet>& models, const std::vector<Term>& conjuncts);
// Parses "a, -b(c)" into ground literals.
std::vector<Term> parse_query(std::string_view text);

// Atoms sorted by term order; projected on #show predicates when present.
std::vector<Term> render(const GroundProgram& g, const AnswerSet& m, bool project = true);
std::string render_line(const GroundProgram& g, const AnswerSet& m, bool project = true);

} // namespace cnl::asp
