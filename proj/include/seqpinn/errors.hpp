#pragma once

#include <stdexcept>
#include <string>

namespace seqpinn {

/// Shapes, dimensions or invariants of an object are inconsistent.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

/// An input is syntactically valid but degenerate (empty batch, U = 0, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A file on disk does not match the expected format or fails validation.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqpinn
