#pragma once

#include <stdexcept>
#include <string>

namespace wtm {

/// Bad input: a precondition or a parameter-range check failed.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not produce a trustworthy value
/// (non-convergent series, divergent integral, failed shooting bracket).
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

} // namespace detail
} // namespace wtm
