#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmcast {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input text: stream files, pattern syntax, JSON documents.
/// `line` is 1-based when the input is line-oriented and 0 otherwise.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a domain rule (unknown symbol,
/// epsilon-accepting pattern, bad threshold, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The waiting-time mass inside the horizon cannot reach the threshold.
class HorizonInsufficient : public DomainError {
public:
    HorizonInsufficient(double achievable, double theta);
    double achievable() const noexcept { return achievable_; }
    double theta() const noexcept { return theta_; }

private:
    double achievable_;
    double theta_;
};

} // namespace pmcast
