#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace equicohom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural input errors: broken identities, bad tables, dangling names.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// delta^{n+1} o delta^n != 0
class ComplexNotExact : public Error {
 public:
  using Error::Error;
};

// G-connectedness or the G-fixed base vertex is missing.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class PathMissing : public Error {
 public:
  using Error::Error;
};

class NotCohomologous : public Error {
 public:
  using Error::Error;
};

// A theorem-guaranteed property failed. Always a bug or a convention error.
class LiftInvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Accumulates every violated identity together with its witness.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void fail(std::string what) { violations.push_back(std::move(what)); }
  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& v : other.violations) violations.push_back(prefix + v);
  }
  void throw_if_failed(const std::string& context) const {
    if (!ok()) throw ValidationError(context + ": " + violations.front());
  }
};

}  // namespace equicohom
