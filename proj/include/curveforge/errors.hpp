#pragma once

#include <stdexcept>
#include <string>

namespace cf {

// Error taxonomy shared by all modules.  The CLI maps these onto exit codes
// and message prefixes, so the distinction matters:
//
//   UsageError    - malformed input, bad arguments, parse failures    (exit 2)
//   Refusal       - a precondition is honestly unmet; not a bug       (exit 1)
//   Alarm         - an internal invariant failed; always a bug        (exit 3)

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : UsageError {
    int line;  // 1-based line number in the offending document
    ParseError(int line_, const std::string& what)
        : UsageError("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct Refusal : std::runtime_error {
    explicit Refusal(const std::string& what) : std::runtime_error(what) {}
};

struct Alarm : std::logic_error {
    explicit Alarm(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

inline void check(bool cond, const std::string& msg) {
    if (!cond) throw Alarm(msg);
}

}  // namespace cf
