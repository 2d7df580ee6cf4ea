#pragma once

#include <stdexcept>
#include <string>

namespace emomine {

// Base for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A non-fatal diagnostic attached to a processing step (parser warnings,
// skipped inputs, duplicate lexicon entries, ...). Collected by the
// operation that produced it; the CLI prints them to stderr.
struct Diag {
    std::string source;  // file or logical input the diagnostic refers to
    long ordinal = 0;    // block / line number within the source, 0 if n/a
    std::string reason;
};

}  // namespace emomine
