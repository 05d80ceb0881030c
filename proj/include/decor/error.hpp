#pragma once

#include <stdexcept>
#include <string>

namespace decor {

enum class ErrorCode {
  UnknownGenerator,
  CompositionMismatch,
  FlavorViolation,
  IllFormed,
  SideConditionViolated,
  PremiseShapeMismatch,
  NotAnAccessor,
  DuplicateLocation,
  PureSideNotPure,
  UnknownLemma,
  BadParams,
  UnknownConstructor,
  EmptyHandler,
  CodomainMismatch,
  CarrierMissing,
  SearchSpaceTooLarge,
  SuiteUnknown,
  SyntaxError,
  NameError,
};

const char* code_name(ErrorCode c);

class DecorError : public std::runtime_error {
 public:
  DecorError(ErrorCode c, const std::string& detail)
      : std::runtime_error(std::string(code_name(c)) + ": " + detail), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace decor
