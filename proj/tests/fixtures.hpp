#pragma once

#include "cnlkit/chart.hpp"
#include "cnlkit/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace fixtures {

inline std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(CNLKIT_DATA_DIR) + "/" + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const cnl::Lexicon& lexicon() {
    static const cnl::Lexicon lex = cnl::load_lexicon_file(std::string(CNLKIT_DATA_DIR) + "/cnl/lexicon.pl");
    return lex;
}

inline const cnl::Grammar& grammar() {
    static const cnl::Grammar g = cnl::load_grammar_file(std::string(CNLKIT_DATA_DIR) + "/cnl/cnl.grammar");
    return g;
}

} // namespace fixtures
