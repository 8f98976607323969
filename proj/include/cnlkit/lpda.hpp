#pragma once

#include "cnlkit/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cnl::lpda {

// Not-free literal in `atom` (possibly "-"(A) for neg A); `naf` adds `not`.
struct Literal {
    Term atom;
    bool naf = false;
};

// op is "is" or a comparison.
struct Builtin {
    std::string op;
    Term lhs, rhs;
};

using BodyItem = std::variant<Literal, Builtin>;

struct Rule {
    std::optional<Term> label;  // present iff defeasible
    Term head;
    std::vector<BodyItem> body;
    std::string source;  // sentence id the rule came from, if any
    int line = 0;

    bool defeasible() const { return label.has_value(); }
};

struct Program {
    std::vector<Rule> rules;
};

// Variables are written ?Name; constants may be capitalized.
Program parse_lpda(std::string_view text);
Term parse_literal(std::string_view text);
std::vector<BodyItem> parse_goal(std::string_view text);

std::string print_term(const Term& t);
std::string print_rule(const Rule& r);
std::string print_program(const Program& p);

struct GroundRule {
    int head = -1;
    std::vector<int> pos, neg;
    int handle = -1;    // index into GroundProgram::handles for defeasible instances
    int source = -1;    // index of the originating Rule
};

struct Handle {
    Term label;
    int head = -1;      // atom id of the concluded literal
    Term term;          // handle(label, head)
};

struct GroundProgram {
    AtomStore atoms;
    std::vector<GroundRule> rules;
    std::vector<Handle> handles;
    std::vector<Rule> source_rules;
};

// Throws Errc::unsafe_rule naming the rule and variable.
GroundProgram ground(const Program& p);

struct NormalRule {
    int head = -1;
    std::vector<int> pos, neg;
};

struct NormalProgram {
    AtomStore atoms;
    std::vector<NormalRule> rules;
};

NormalProgram reduce_defeasible(const GroundProgram& g);
// Appends the argumentation theory for g's handles to np.
void default_argumentation_theory(const GroundProgram& g, NormalProgram& np);

enum class Truth { t, f, u };
const char* truth_name(Truth v);

struct Interpretation {
    std::vector<Truth> value;  // per atom of the program it was computed for
    std::vector<std::pair<std::size_t, std::size_t>> trace;  // (|true|, |possible|) per round
    bool consistent = true;
    std::vector<int> conflicts;  // atoms A with A and neg A both true
};

Interpretation wfm(const NormalProgram& p);

struct Provenance {
    std::string label;   // empty for definite rules
    std::string source;  // sentence id, may be empty
};

struct QueryResult {
    enum class Status { yes, no, unknown };
    bool ground = true;
    Status status = Status::no;
    std::vector<std::map<std::string, Term>> answers;  // open goals: true bindings
    std::vector<std::vector<Provenance>> provenance;  // per answer (or one entry for ground goals)
    std::size_t undefined_instances = 0;
    bool inconsistent = false;
};

const char* status_name(QueryResult::Status s);

// Grounds, reduces, adds the argumentation theory and computes the WFM once.
class Engine {
public:
    explicit Engine(Program p);

    Truth truth(const Term& literal) const;
    QueryResult query(const std::vector<BodyItem>& goal) const;
    QueryResult query(std::string_view goal) const { return query(parse_goal(goal)); }

    bool consistent() const { return model_.consistent; }
    const Interpretation& model() const { return model_; }
    const GroundProgram& grounded() const { return ground_; }
    const NormalProgram& normal() const { return normal_; }
    // T/F/U sections over user literals, sorted.
    std::string dump() const;

private:
    std::vector<Provenance> support(int atom) const;

    GroundProgram ground_;
    NormalProgram normal_;
    Interpretation model_;
};

} // namespace cnl::lpda
