#include "cnlkit/error.hpp"

namespace cnl {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::parse: return "parse_error";
    case Errc::validation: return "validation_error";
    case Errc::illegal_word: return "illegal_word";
    case Errc::unknown_word: return "unknown_word";
    case Errc::unresolved_reference: return "unresolved_reference";
    case Errc::unsupported: return "unsupported_construction";
    case Errc::scope: return "scope_violation";
    case Errc::unsafe_rule: return "unsafe_rule";
    case Errc::arithmetic: return "arithmetic_error";
    case Errc::dangling_target: return "dangling_target";
    case Errc::cycle: return "overrides_cycle";
    case Errc::size: return "size_error";
    case Errc::bounds: return "out_of_bounds";
    case Errc::no_knowledge_base: return "no_knowledge_base";
    }
    return "error";
}

} // namespace cnl
