#pragma once

#include <stdexcept>
#include <string>

namespace subreg {

/// Evaluation outside a map's domain, or an operation on an empty set
/// that needs a point.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested operation needs an oracle the map does not provide
/// (e.g. an inverse without a search window).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Theorem hypotheses that the caller's parameters violate.
class ApplicabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Convergence analysis on a trace that is too short or degenerate.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed experiment document. `where()` is a JSON pointer.
class SpecError : public std::runtime_error {
public:
    SpecError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const { return where_; }

private:
    std::string where_;
};

}  // namespace subreg
