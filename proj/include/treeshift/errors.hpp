#pragma once

#include <stdexcept>
#include <string>

namespace treeshift {

// Base of all library errors. CLI maps subclasses to distinct exit codes.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input: unparseable spec, bad address syntax,
// invalid parameters, unknown vertex names. CLI exit code 2.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// Domain error: a mathematical precondition fails (leaf where a leafless
// subtree is required, unbounded operator, violated parameter constraint,
// decay that never reaches the requested threshold). CLI exit code 1.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// The computation would need vertices outside the declared depth window, or
// the enumeration budget was hit. Callers must widen the window (or raise
// TREESHIFT_WINDOW_LIMIT); results are never silently truncated. Exit code 3.
class WindowExhausted : public Error {
public:
  explicit WindowExhausted(const std::string& what) : Error(what) {}
};

}  // namespace treeshift
