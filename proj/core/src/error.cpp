#include "annote/error.hpp"

namespace annote {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyTerm: return "EmptyTerm";
    case ErrorCode::EmptyAttribute: return "EmptyAttribute";
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::InvalidPair: return "InvalidPair";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::EmptyAnnotator: return "EmptyAnnotator";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::CyclicTarget: return "CyclicTarget";
    case ErrorCode::InvalidObject: return "InvalidObject";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotImplicit: return "NotImplicit";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedCriterion: return "UnresolvedCriterion";
    case ErrorCode::AllUnresolved: return "AllUnresolved";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : Error(ErrorCode::SyntaxError,
            "syntax error at offset " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

NoCandidatesError::NoCandidatesError(std::size_t pair_index)
    : Error(ErrorCode::NoCandidates,
            "no explicitation candidates for pair " + std::to_string(pair_index)),
      pair_index_(pair_index) {}

}  // namespace annote
