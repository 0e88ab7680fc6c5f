#pragma once

#include <stdexcept>
#include <string>

namespace plateful {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Input data violates a format or an invariant. `line` is 1-based, 0 when
/// the problem is not tied to a line.
class DataError : public Error {
  public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), m_line(line)
    {}
    std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

/// Caller passed an argument outside an operation's precondition.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

}  // namespace plateful
