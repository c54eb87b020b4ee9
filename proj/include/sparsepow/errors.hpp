#pragma once

#include <stdexcept>
#include <string>

namespace sparsepow {

/// Construction parameters that do not match the requested lemma shape.
class WrongFormError : public std::invalid_argument {
public:
    explicit WrongFormError(const std::string& what) : std::invalid_argument(what) {}
};

/// A constructed member failed its post-hoc digit-count / coprimality check.
/// Members are never returned unverified; this surfacing loudly is intentional.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search exceeded its wall-clock budget before finishing.
class SearchTimeout : public std::runtime_error {
public:
    explicit SearchTimeout(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sparsepow
