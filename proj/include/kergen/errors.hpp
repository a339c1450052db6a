#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kergen {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* code() const noexcept { return "Error"; }
};

#define KERGEN_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(what) {}        \
    const char* code() const noexcept override { return #Name; }   \
  };

KERGEN_DEFINE_ERROR(ClosureCapExceeded)
KERGEN_DEFINE_ERROR(MixedElementKinds)
KERGEN_DEFINE_ERROR(NonNormalArguments)
KERGEN_DEFINE_ERROR(NotNormal)
KERGEN_DEFINE_ERROR(EmptyList)
KERGEN_DEFINE_ERROR(MixedParents)
KERGEN_DEFINE_ERROR(GroupTooLarge)
KERGEN_DEFINE_ERROR(NotInvariant)
KERGEN_DEFINE_ERROR(TransgressionSolveFailed)
KERGEN_DEFINE_ERROR(NonCommutingSquare)
KERGEN_DEFINE_ERROR(WordTooShort)
KERGEN_DEFINE_ERROR(InvalidInput)

#undef KERGEN_DEFINE_ERROR

// Raised when a search exhausts its prefix budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t explored)
      : Error(what + " (explored " + std::to_string(explored) + " prefixes)"),
        explored_(explored) {}
  const char* code() const noexcept override { return "BudgetExceeded"; }
  std::uint64_t explored() const noexcept { return explored_; }

 private:
  std::uint64_t explored_;
};

}  // namespace kergen
