#pragma once

#include <stdexcept>
#include <string>

namespace cnl {

enum class Errc {
    parse,
    validation,
    illegal_word,
    unknown_word,
    unresolved_reference,
    unsupported,
    scope,
    unsafe_rule,
    arithmetic,
    dangling_target,
    cycle,
    size,
    bounds,
    no_knowledge_base,
};

const char* errc_name(Errc c);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace cnl
