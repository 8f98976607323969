#pragma once

#include "cnlkit/decimal.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cnl {

// First-order term shared by both logic engines. Strong negation of an atom is
// the unary compound "-"(A); arithmetic uses binary compounds "+", "-", "*", "/".
struct Term {
    enum class Kind : std::uint8_t { symbol, number, variable, compound };

    Kind kind = Kind::symbol;
    std::string name;
    Decimal value;
    std::vector<Term> args;

    static Term sym(std::string s);
    static Term num(Decimal d);
    static Term var(std::string v);
    static Term fn(std::string f, std::vector<Term> a);
    static Term negate(Term atom);

    bool is_var() const { return kind == Kind::variable; }
    bool is_num() const { return kind == Kind::number; }
    bool is_compound() const { return kind == Kind::compound; }
    bool is_strong_neg() const { return kind == Kind::compound && name == "-" && args.size() == 1; }
    bool is_arith() const;
    bool ground() const;

    // Atom with strong negation stripped.
    const Term& atom() const { return is_strong_neg() ? args[0] : *this; }
    // "name/arity", with a leading '-' for strongly negated atoms.
    std::string pred_key() const;
    // Canonical text: equal terms have equal keys (1.5 and 1.50 collide).
    std::string key() const;
    // Display text; `neg_word` selects "neg p" (LPDA) over "-p" (ASP).
    std::string str(bool neg_word = false) const;

    void collect_vars(std::vector<std::string>& out) const;
};

bool operator==(const Term& a, const Term& b);
std::strong_ordering operator<=>(const Term& a, const Term& b);

class Bindings {
public:
    const Term* get(const std::string& v) const;
    void set(const std::string& v, Term t) { items_.emplace_back(v, std::move(t)); }
    std::size_t mark() const { return items_.size(); }
    void undo(std::size_t m) { items_.resize(m); }
    const std::vector<std::pair<std::string, Term>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, Term>> items_;
};

Term substitute(const Term& t, const Bindings& b);
// Substitutes, then folds fully ground arithmetic into numbers.
Term resolve(const Term& t, const Bindings& b);
bool match(const Term& pattern, const Term& ground, Bindings& b);
// Evaluates arithmetic; throws on unbound variables or non-numeric operands.
Term evaluate(const Term& t, const Bindings& b);
bool compare_op(const std::string& op, const Term& a, const Term& b);
bool is_compare_op(const std::string& op);

// Interned ground atoms with a per-predicate index.
class AtomStore {
public:
    int intern(const Term& t);
    std::optional<int> find(const Term& t) const;
    const Term& at(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(atoms_.size()); }
    const std::vector<int>& of_pred(const std::string& key) const;

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<Term> atoms_;
    std::unordered_map<std::string, std::vector<int>> by_pred_;
};

// One conjunct of a grounding join.
struct Goal {
    enum class Kind { atom, compare, assign };
    Kind kind = Kind::atom;
    Term atom;          // atom goal; matched against the store
    std::string op;     // compare operator, or "is"
    Term lhs, rhs;
};

// Orders goals so builtins run once their inputs are bound. Returns nullopt
// (with the offending variable) if some builtin can never be evaluated.
std::optional<std::vector<Goal>> schedule_goals(std::vector<Goal> goals, std::vector<std::string> prebound,
                                                std::string* unbound_var = nullptr);

// Enumerates all bindings satisfying the scheduled goals against the store.
void join(const std::vector<Goal>& goals, const AtomStore& store, Bindings& b,
          const std::function<void(const Bindings&)>& emit);

} // namespace cnl
