#ifndef GENDIFF_ERRORS_HPP
#define GENDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gendiff {

/// The input is not in the range of T (its membership verdict is not
/// "member"), so an operation that needs a member refuses to run.
class MembershipRefused : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Every difference symbol in play vanishes identically.
class DegenerateShifts : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shift set on Z_N leaves a common symbol zero outside {alpha, beta} where
/// the signal has energy.
class InfeasibleShifts : public std::runtime_error {
public:
  InfeasibleShifts(const std::string& what, long frequency)
      : std::runtime_error(what), frequency_(frequency) {}
  long frequency() const { return frequency_; }

private:
  long frequency_;
};

/// Malformed input file; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

} // namespace gendiff

#endif
