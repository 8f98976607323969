#pragma once

#include "cnlkit/drs.hpp"
#include "cnlkit/lpda.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cnl {

// Ordered scales, weakest first. A symbol belongs to at most one scale.
class ScaleTable {
public:
    void add(std::vector<std::string> scale);  // throws Errc::validation
    // Scale containing sym and its position, or nullptr.
    const std::vector<std::string>* find(const std::string& sym, std::size_t* pos = nullptr) const;
    const std::vector<std::vector<std::string>>& scales() const { return scales_; }

private:
    std::vector<std::vector<std::string>> scales_;
};

// `scale(some, all).` per line, `%` comments.
ScaleTable load_scales(std::string_view text);
ScaleTable load_scales_file(const std::string& path);

class SkolemGen {
public:
    std::string fresh() { return "#" + std::to_string(++issued_); }
    int issued() const { return issued_; }

private:
    int issued_ = 0;
};

struct Translation {
    lpda::Program program;
    std::map<std::string, std::string> label_source;  // defeasible label -> sentence id
    std::vector<std::string> notices;
    std::string text() const { return lpda::print_program(program); }
};

Translation translate(const Document& doc, const ScaleTable& scales);

// Adds overrides(a,c) for every chain a > b > c of ground overrides facts.
// Throws Errc::cycle naming the labels on a cycle.
lpda::Program overrides_closure(lpda::Program p);

// Two alternatives only. Inclusive: each follows from the strong negation of
// the other. Exclusive: each one's strong negation follows from the other.
std::vector<lpda::Rule> encode_disjunction(bool exclusive, const std::vector<Term>& alternatives);

// Goal literal(s) for a question; "how much" questions leave ?Amount open.
std::vector<lpda::BodyItem> question_goal(const QuestionDrs& q);

} // namespace cnl
