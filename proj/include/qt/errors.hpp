#pragma once

#include <stdexcept>
#include <string>

namespace qt {

/// Argument outside the mathematical domain of an operation (zero symbol
/// argument, bad prime, precondition of a lemma not met, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input the implementation deliberately does not handle (degree caps,
/// unsupported q, even-degree Jacobian arithmetic).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value that should satisfy a structural invariant does not.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Bounded search exhausted without a witness.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Schema violation while ingesting external data.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CacheMissError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qt
