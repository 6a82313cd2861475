#pragma once

#include <stdexcept>
#include <string>

namespace cofix {

// Bad input: parse errors, invalid models, ill-formed formulas, missing files.
// The CLI maps these to exit code 1.
class UserError : public std::runtime_error {
public:
    explicit UserError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant: iteration bound blown, mis-keyed operator,
// inconsistent closure. Exit code 2.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

// A Kleene iterate lost ground at some coordinate, so the operator that was
// promised monotone is not. Carries the offending coordinate.
class NotMonotoneError : public std::runtime_error {
public:
    NotMonotoneError(const std::string& key, int state)
        : std::runtime_error("operator not monotone: iterate decreased at key '" + key +
                             "', state index " + std::to_string(state)),
          key(key),
          state(state) {}
    std::string key;
    int state;
};

} // namespace cofix
