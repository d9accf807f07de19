#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace annote {

enum class ErrorCode {
  EmptyTerm,
  EmptyAttribute,
  InvalidEncoding,
  InvalidPair,
  EmptyTarget,
  EmptyAnnotator,
  InvalidIdentifier,
  InvalidDocument,
  DuplicateId,
  CyclicTarget,
  InvalidObject,
  UnknownId,
  ParseError,
  NotImplicit,
  NoCandidates,
  SyntaxError,
  UnresolvedCriterion,
  AllUnresolved,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is
/// stable and is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Query text could not be parsed. `position` is a byte offset into the
/// input; `expected` names what the parser was looking for.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected);

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// Explicitation found nothing for one implicit pair.
class NoCandidatesError : public Error {
 public:
  explicit NoCandidatesError(std::size_t pair_index);

  std::size_t pair_index() const noexcept { return pair_index_; }

 private:
  std::size_t pair_index_;
};

}  // namespace annote
