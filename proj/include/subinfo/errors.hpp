#pragma once

#include <stdexcept>
#include <string>

namespace subinfo {

enum class ErrorKind {
    Usage,       // bad flags, missing files
    Parse,       // malformed input text
    Domain,      // parameter outside its admissible domain
    Numeric,     // precision loss, non-finite objective
    Convergence  // iterative method did not converge
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(ErrorKind::Parse, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::Numeric, w) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& w) : Error(ErrorKind::Convergence, w) {}
};

// Process exit status for the command-line front end.
inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Usage: return 2;
    case ErrorKind::Parse: return 3;
    case ErrorKind::Domain:
    case ErrorKind::Numeric:
    case ErrorKind::Convergence: return 4;
    }
    return 1;
}

}  // namespace subinfo
