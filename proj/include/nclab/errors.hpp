#pragma once

#include <stdexcept>

namespace nclab {

// Caller passed arguments that violate a documented precondition.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A value fell outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct GenerationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A client still lacks at least one packet of its required set.
struct NotYetDecodable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonTermination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AuditFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nclab
