#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cnl::circ {

// Bit i set = atom i true, atoms numbered in declaration order.
using Model = std::uint32_t;
constexpr int kMaxAtoms = 24;

struct Clause {
    Model pos = 0;
    Model neg = 0;
    bool satisfied(Model m) const { return (m & pos) != 0 || (~m & neg) != 0; }
};

class GroundTheory {
public:
    int atom(std::string_view text);  // interns; throws Errc::size past kMaxAtoms
    int find(std::string_view text) const;  // -1 if absent
    void add_clause(Clause c) { clauses_.push_back(c); }
    void minimize(std::string pred) { minimized_.insert(std::move(pred)); }
    void vary(std::string pred) { varied_.insert(std::move(pred)); }

    int size() const { return static_cast<int>(atoms_.size()); }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    // Throws Errc::validation if a predicate is both minimized and varied.
    Model minimized_mask() const;
    Model varied_mask() const;
    Model fixed_mask() const;
    bool satisfies(Model m) const;
    std::vector<std::string> true_atoms(Model m) const;

private:
    Model pred_mask(const std::set<std::string>& preds) const;

    std::vector<std::string> atoms_;
    std::vector<Clause> clauses_;
    std::set<std::string> minimized_, varied_;
};

// One clause per line: `l1 | l2 | ... .` with `-` for negation;
// directives `#minimize p.`, `#vary q.`, `#atom a.`; `%` comments.
GroundTheory parse_theory(std::string_view text);

class Formula {
public:
    enum class Kind { atom, neg, conj, disj };
    Kind kind = Kind::atom;
    int atom = -1;
    std::vector<Formula> kids;
    bool holds(Model m) const;
};

// `-`, `&`, `|`, parentheses over atoms of t.
Formula parse_formula(std::string_view text, const GroundTheory& t);

std::vector<Model> classical_models(const GroundTheory& t);
// Subset-closure kernel, OpenMP-parallel; ascending model order.
std::vector<Model> minimal_models(const GroundTheory& t);
// Pairwise check straight from the ordering definition; serial.
std::vector<Model> minimal_models_reference(const GroundTheory& t);

bool circ_entails(const GroundTheory& t, const Formula& phi);
bool circ_entails(const GroundTheory& t, std::string_view phi);

} // namespace cnl::circ
