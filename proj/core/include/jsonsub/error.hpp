#pragma once

#include <stdexcept>
#include <string>

namespace jsonsub {

enum class errc {
    parse_error,          // input is not valid JSON
    pointer_syntax,       // malformed JSON pointer
    pointer_not_found,    // pointer segment missing
    meta_invalid,         // schema violates the draft-04 meta-schema
    recursive_ref,        // $ref resolution revisited an in-progress node
    ref_target_missing,   // $ref points at nothing
    unsupported_pattern,  // regex feature outside the supported dialect
    capacity,             // a configured resource budget was exceeded
    number_format,        // number cannot be rendered as a finite decimal
    io_error,             // file could not be read
};

const char* to_string(errc code);

class error : public std::runtime_error {
public:
    error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, std::string message) {
    throw error(code, std::move(message));
}

} // namespace jsonsub
