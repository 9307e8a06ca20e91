#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace optocorr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// Symplectic discriminant or a radicand went negative beyond rounding.
class NumericalDegeneracyError : public Error {
  public:
    using Error::Error;
};

/// CM is outside the class for which a closed form is exact.
class OutOfClassError : public Error {
  public:
    using Error::Error;
};

/// Drift matrix is not Hurwitz, so no stationary state exists.
class NoSteadyStateError : public Error {
  public:
    using Error::Error;
};

class IntegrationFailureError : public Error {
  public:
    IntegrationFailureError(const std::string &what, std::size_t worst_entry)
        : Error(what), worst_entry_(worst_entry) {}

    /// Flat index (row * 8 + col) of the least converged CM entry.
    std::size_t worst_entry() const noexcept { return worst_entry_; }

  private:
    std::size_t worst_entry_;
};

/// A bipartition sub-block is not in standard form.
class FormViolationError : public Error {
  public:
    using Error::Error;
};

class BracketError : public Error {
  public:
    using Error::Error;
};

class MonotonicityViolationError : public Error {
  public:
    using Error::Error;
};

class NonPhysicalError : public Error {
  public:
    using Error::Error;
};

/// Invalid sweep configuration; the message starts with the offending field path.
class ConfigError : public Error {
  public:
    ConfigError(const std::string &field, const std::string &what)
        : Error(field + ": " + what), field_(field) {}

    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

} // namespace optocorr
