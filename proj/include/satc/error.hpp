#pragma once

#include <stdexcept>
#include <string>

namespace satc
{

/// Operand outside an operation's domain (gcd(0,0), q = 0, sqrt of a negative).
class domain_error : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

class division_by_zero : public domain_error
{
public:
  division_by_zero() : domain_error( "division by zero" ) {}
};

/// Malformed literal, expression, spec file or circuit document.
class parse_error : public std::runtime_error
{
public:
  parse_error( const std::string& what, std::size_t line = 0, std::size_t column = 0 )
      : std::runtime_error( line ? what + " (line " + std::to_string( line ) + ", column " + std::to_string( column ) + ")" : what ),
        line_( line ), column_( column )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Expression or spec evaluation failure (arity, type, unknown host function).
class eval_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The compiler cannot build a circuit for the given spec or plan.
class compile_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace satc
