#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lqdim {

// Work or size budget exceeded. The caller should coarsen the inputs or
// raise the cap explicitly.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what)
      : std::runtime_error(what) {}
};

// A declarative measure spec violates one of its structural conditions.
// `condition()` names the violated condition (e.g. "M1", "weights-sum").
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string condition, const std::string& what)
      : std::runtime_error("[" + condition + "] " + what),
        condition_(std::move(condition)) {}

  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// Operation is undefined on a zero-diameter (Dirac-like) support.
class DegenerateSupportError : public std::runtime_error {
 public:
  explicit DegenerateSupportError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace lqdim
